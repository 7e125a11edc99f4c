#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace evalforge {

enum class Provider { openai, anthropic, google, mock };
enum class CachePolicy { enabled, read_only, write_only, replay, disabled };
enum class CiMethod { percentile, bca, analytical };
enum class DataFormat { jsonl, csv };
enum class MetricFamily { lexical, semantic, llm_judge, rag };

std::string to_string(Provider p);
std::string to_string(CachePolicy p);
std::string to_string(CiMethod m);
std::string to_string(DataFormat f);
std::string to_string(MetricFamily f);

struct ModelConfig {
    Provider provider = Provider::mock;
    std::string model_name;
    double temperature = 0.0;
    int max_tokens = 1024;
    std::optional<double> price_per_1m_input;
    std::optional<double> price_per_1m_output;
    std::optional<std::string> base_url;  // endpoint override (tests, proxies)
    double timeout_seconds = 60.0;

    bool operator==(const ModelConfig&) const = default;
};

struct InferenceConfig {
    int batch_size = 50;
    int max_retries = 3;
    double retry_delay = 1.0;
    CachePolicy cache_policy = CachePolicy::enabled;
    std::string cache_dir = "evalforge_cache";
    std::optional<std::int64_t> cache_ttl_days;
    std::int64_t rate_limit_rpm = 10000;
    std::int64_t rate_limit_tpm = 2000000;
    int num_workers = 8;

    bool operator==(const InferenceConfig&) const = default;
};

struct MetricConfig {
    std::string name;
    MetricFamily type = MetricFamily::lexical;
    /// Scalar parameters (rubric text, n-gram order, normalization flags...).
    /// Values are restricted to string/number/bool at parse time.
    nlohmann::json params = nlohmann::json::object();

    bool operator==(const MetricConfig&) const = default;

    std::string param_str(const std::string& key, const std::string& dflt) const;
    double param_double(const std::string& key, double dflt) const;
    std::int64_t param_int(const std::string& key, std::int64_t dflt) const;
    bool param_bool(const std::string& key, bool dflt) const;
};

struct StatisticsConfig {
    double confidence_level = 0.95;
    int bootstrap_iterations = 1000;
    CiMethod ci_method = CiMethod::percentile;
    double significance_alpha = 0.05;
    std::optional<std::uint64_t> rng_seed;

    bool operator==(const StatisticsConfig&) const = default;

    /// Seed used by the run; absent rng_seed means a fixed default so runs
    /// are deterministic unless the user asks otherwise.
    std::uint64_t effective_seed() const { return rng_seed.value_or(0); }
};

struct DataConfig {
    std::string input_path;
    DataFormat input_format = DataFormat::jsonl;
    std::string prompt_template;
    std::optional<std::string> reference_column;
    std::optional<std::string> context_column;
    std::optional<std::string> id_column;

    bool operator==(const DataConfig&) const = default;
};

/// Complete declarative specification of one evaluation run. Immutable
/// after construction; safe to share read-only across workers.
struct EvalTask {
    std::string task_id;
    ModelConfig model;
    InferenceConfig inference;
    std::vector<MetricConfig> metrics;
    StatisticsConfig statistics;
    DataConfig data;

    bool operator==(const EvalTask&) const = default;
};

/// Parses and validates a JSON task document. All defaults are materialized
/// here so the serialized form is the complete run record. Throws
/// ConfigError with a position-annotated message on syntax errors and a
/// dotted field path on validation errors (including unknown keys and
/// unregistered metric names).
EvalTask parse_task(const std::string& text);

/// Canonical serialization: every field present (absent optionals as null),
/// keys in sorted order, so structurally equal tasks serialize
/// byte-identically and parse∘serialize is the identity.
std::string serialize_task(const EvalTask& task);

nlohmann::json task_to_json(const EvalTask& task);

}  // namespace evalforge
