/// @file runner.hpp
/// Orchestrates the evaluation pipeline: contiguous partitioning across a
/// worker pool, per-worker engines and rate limiters, cache-resolved
/// inference, metric scoring, and single-threaded statistical
/// aggregation. Also hosts model comparison and throughput simulation.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "evalforge/cache.hpp"
#include "evalforge/config.hpp"
#include "evalforge/dataset.hpp"
#include "evalforge/embedder.hpp"
#include "evalforge/metrics.hpp"
#include "evalforge/provider.hpp"
#include "evalforge/stats.hpp"
#include <json.hpp>

namespace evalforge {

struct FailureEntry {
    std::string example_id;
    FailureRecord record;
};

struct EvalResult {
    std::string task_id;
    double started_at = 0.0;
    double finished_at = 0.0;
    std::map<std::string, MetricValue> per_metric;
    std::vector<ScoredExample> per_example;
    std::vector<FailureEntry> failures;
    CacheStats cache_stats;
    double total_cost = 0.0;
    std::int64_t total_examples = 0;
    std::int64_t failed_examples = 0;
    std::int64_t excluded_unparseable = 0;
    std::string config_snapshot;
};

struct ComparisonResult {
    std::string metric_name;
    std::string model_a;
    std::string model_b;
    MetricValue value_a;
    MetricValue value_b;
    TestResult test;
    EffectSizes effects;
    SelectedTest recommended_test = SelectedTest::permutation;
    std::optional<TestResult> fallback_permutation;
    std::int64_t paired_n = 0;
};

/// Test/simulation hooks for evaluate(). Leave fields defaulted for
/// production behavior (system clock, fresh cache store from config).
struct RunEnv {
    EngineEnv engines;
    /// Per-worker clock override (non-owning); workers fall back to
    /// engines.clock, then to a shared system clock.
    std::function<Clock*(int worker_id)> worker_clock;
    /// Externally opened store (e.g. shared across runs in tests). When
    /// null and the policy touches the cache, evaluate opens
    /// task.inference.cache_dir itself.
    CacheStore* cache = nullptr;
    /// Shared embedder override; default is a per-worker deterministic
    /// embedder.
    Embedder* embedder = nullptr;
};

/// Contiguous chunks as (offset, length): order-preserving, sizes differ
/// by at most one, concatenation covers [0, count).
std::vector<std::pair<std::size_t, std::size_t>> partition(std::size_t count,
                                                           int num_workers);

/// Runs the full pipeline. Throws RunAbort on a replay cache miss
/// (naming the lowest-indexed missing example); individual example
/// failures are recorded, not thrown.
EvalResult evaluate(const EvalTask& task, const std::vector<Example>& examples,
                    RunEnv* env = nullptr);

/// Pairs the two runs' scores by example_id (complete cases only),
/// selects a test per the metric type and a normality check on the
/// differences, and attaches effect sizes. Adds a permutation fallback
/// when the selected test came back degenerate.
ComparisonResult compare(const EvalResult& result_a, const EvalResult& result_b,
                         const std::string& metric_name,
                         const StatisticsConfig& cfg);

/// Mock evaluation under per-worker simulated clocks with a fixed
/// per-call latency; returns achieved examples/minute. Null rpm/tpm
/// means unconstrained.
double simulate_throughput(int num_workers, double latency_seconds,
                           std::optional<double> rpm, std::optional<double> tpm,
                           int n_examples);

/// JSON forms. canonical=true zeroes timestamps so byte equality can be
/// checked across runs.
nlohmann::json result_to_json(const EvalResult& result, bool canonical = false);
nlohmann::json comparison_to_json(const ComparisonResult& result);

/// Writes result.json, config.json, scores.jsonl, failures.jsonl under
/// <runs_root>/<task_id>/<label>/ and returns that directory.
std::string write_run_record(const EvalTask& task, const EvalResult& result,
                             const std::string& runs_root,
                             const std::string& label);

/// Loads a run record directory back into an EvalResult (as much of it
/// as compare() needs).
EvalResult load_run_record(const std::string& run_dir);

}  // namespace evalforge
