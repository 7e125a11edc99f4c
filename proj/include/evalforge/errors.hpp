#pragma once

#include <stdexcept>
#include <string>

namespace evalforge {

/// Configuration syntax or validation failure. `field` is the dotted path
/// of the offending field ("statistics.confidence_level"), empty for
/// document-level syntax errors.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field.empty() ? message : field + ": " + message),
          field_(std::move(field)) {}

    const std::string& field() const { return field_; }

private:
    std::string field_;
};

class DatasetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CacheError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Aborts an evaluation run (replay cache miss, unusable dataset mid-run).
/// Maps to CLI exit code 1.
class RunAbort : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace evalforge
