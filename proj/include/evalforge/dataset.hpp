/// @file dataset.hpp
/// Loads evaluation examples from JSONL/CSV files and renders prompts
/// from {name} placeholder templates.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "evalforge/config.hpp"

namespace evalforge {

struct Example {
    std::string example_id;
    std::map<std::string, std::string> fields;
    std::string rendered_prompt;
    std::optional<std::string> reference;
    std::optional<std::vector<std::string>> contexts;
};

/// Replaces {name} placeholders with field values. `{{` and `}}` are
/// literal braces. Throws DatasetError for unknown placeholders and
/// unbalanced braces.
std::string render_prompt(const std::string& tmpl,
                          const std::map<std::string, std::string>& fields);

/// Placeholder names appearing in a template, in order of first use.
std::vector<std::string> template_placeholders(const std::string& tmpl);

/// Loads all examples in file order, renders prompts, and validates
/// configured columns. Throws DatasetError with line numbers for
/// malformed records; any failed record aborts the load.
std::vector<Example> load_dataset(const DataConfig& cfg);

/// RFC-4180 CSV parsing: header row plus records, quoted fields may
/// contain commas, quotes ("" escape), and newlines.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

}  // namespace evalforge
