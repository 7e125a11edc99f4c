/// @file evalforge.cpp
/// Command-line front-end: run evaluations, compare runs, inspect and
/// purge the response cache, and self-validate the statistics layer.
/// Exit codes: 0 success, 1 runtime abort, 2 configuration/usage error.

#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "evalforge/config.hpp"
#include "evalforge/dataset.hpp"
#include "evalforge/errors.hpp"
#include "evalforge/report.hpp"
#include "evalforge/runner.hpp"
#include "evalforge/validation.hpp"

using namespace evalforge;

namespace {

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DatasetError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 2;
    } catch (const RunAbort& e) {
        std::cerr << "run aborted: " << e.what() << "\n";
        return 1;
    } catch (const CacheError& e) {
        std::cerr << "cache error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string fresh_run_label(const std::string& runs_root,
                            const std::string& task_id) {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
    const std::string base = buf;
    namespace fs = std::filesystem;
    std::string label = base;
    int k = 2;
    while (fs::exists(fs::path(runs_root) / task_id / label))
        label = base + "-" + std::to_string(k++);
    return label;
}

struct RunArgs {
    std::string task_path;
    std::string data_override;
    std::string cache_dir_override;
    std::int64_t seed = 0;
    bool seed_set = false;
    int workers = 0;
    std::string runs_root = "runs";
    bool json = false;
    bool canonical = false;
};

int cmd_run(const RunArgs& args) {
    std::ifstream file(args.task_path, std::ios::binary);
    if (!file) {
        std::cerr << "config error: cannot open task file " << args.task_path
                  << "\n";
        return 2;
    }
    std::ostringstream buffer;
    buffer << file.rdbuf();
    EvalTask task = parse_task(buffer.str());

    if (!args.data_override.empty()) {
        task.data.input_path = args.data_override;
        if (ends_with(args.data_override, ".csv"))
            task.data.input_format = DataFormat::csv;
        else if (ends_with(args.data_override, ".jsonl"))
            task.data.input_format = DataFormat::jsonl;
    }
    if (!args.cache_dir_override.empty())
        task.inference.cache_dir = args.cache_dir_override;
    if (args.seed_set)
        task.statistics.rng_seed = static_cast<std::uint64_t>(args.seed);
    if (args.workers > 0) task.inference.num_workers = args.workers;
    if (task.inference.rate_limit_rpm < task.inference.num_workers ||
        task.inference.rate_limit_tpm < task.inference.num_workers) {
        throw ConfigError("inference.num_workers",
                          "rate limits must be at least one per worker");
    }

    const std::vector<Example> examples = load_dataset(task.data);
    const EvalResult result = evaluate(task, examples);
    const std::string label = fresh_run_label(args.runs_root, task.task_id);
    const std::string dir = write_run_record(task, result, args.runs_root, label);

    if (args.json) {
        nlohmann::json j = result_to_json(result, args.canonical);
        if (!args.canonical) j["run_dir"] = dir;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << render_report(result, task.statistics.confidence_level);
        std::cout << "\nRun record: " << dir << "\n";
    }
    return 0;
}

struct CompareArgs {
    std::string run_a;
    std::string run_b;
    std::string metric;
    double alpha = 0.05;
    bool alpha_set = false;
    bool json = false;
};

int cmd_compare(const CompareArgs& args) {
    const EvalResult a = load_run_record(args.run_a);
    const EvalResult b = load_run_record(args.run_b);
    if (a.per_metric.find(args.metric) == a.per_metric.end())
        throw ConfigError("metric",
                          "'" + args.metric + "' not present in " + args.run_a);
    if (b.per_metric.find(args.metric) == b.per_metric.end())
        throw ConfigError("metric",
                          "'" + args.metric + "' not present in " + args.run_b);

    StatisticsConfig cfg;
    if (!a.config_snapshot.empty()) cfg = parse_task(a.config_snapshot).statistics;
    if (args.alpha_set) cfg.significance_alpha = args.alpha;

    const ComparisonResult result = compare(a, b, args.metric, cfg);
    if (args.json) {
        std::cout << comparison_to_json(result).dump(2) << "\n";
    } else {
        std::cout << render_comparison(result, cfg.significance_alpha);
    }
    return 0;
}

std::uint64_t cache_bytes(const std::string& dir) {
    namespace fs = std::filesystem;
    std::uint64_t total = 0;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (name.rfind("segment-", 0) == 0) total += entry.file_size();
    }
    return total;
}

int cmd_cache_stats(const std::string& dir, bool json) {
    if (!std::filesystem::exists(dir))
        throw CacheError("cache directory does not exist: " + dir);
    CacheStore store(dir);
    const CacheStats totals = store.cumulative_stats();
    const std::uint64_t bytes = cache_bytes(dir);
    if (json) {
        nlohmann::json j;
        j["live_entries"] = store.live_entries();
        j["physical_records"] = store.physical_records();
        j["bytes"] = bytes;
        j["lookups"] = totals.lookups;
        j["hits"] = totals.hits;
        j["misses"] = totals.misses;
        j["writes"] = totals.writes;
        j["expired_skips"] = totals.expired_skips;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << render_cache_report(totals, store.live_entries(),
                                         store.physical_records(), bytes);
    }
    return 0;
}

int cmd_cache_purge(const std::string& dir, bool json) {
    if (!std::filesystem::exists(dir))
        throw CacheError("cache directory does not exist: " + dir);
    CacheStore store(dir);
    const std::int64_t removed =
        store.purge_expired(static_cast<double>(std::time(nullptr)));
    if (json) {
        nlohmann::json j;
        j["removed"] = removed;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "Removed " << removed << " record"
                  << (removed == 1 ? "" : "s") << "\n";
    }
    return 0;
}

nlohmann::json coverage_to_json(const CoverageReport& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"n", row.n},
                        {"replicates", row.replicates},
                        {"percentile_coverage", row.percentile_coverage},
                        {"bca_coverage", row.bca_coverage}});
    }
    return {{"rows", rows},
            {"true_mean", r.true_mean},
            {"level", r.level},
            {"bca_band_ok", r.bca_band_ok},
            {"ordering_ok", r.ordering_ok},
            {"pass", r.pass}};
}

nlohmann::json type1_to_json(const TypeIReport& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"test", row.test},
                        {"n", row.n},
                        {"replicates", row.replicates},
                        {"rejection_rate", row.rejection_rate},
                        {"in_band", row.in_band}});
    }
    return {{"rows", rows}, {"alpha", r.alpha}, {"pass", r.pass}};
}

int cmd_validate_stats(int replicates, int bootstrap, std::int64_t seed,
                       bool json) {
    const auto useed = static_cast<std::uint64_t>(seed);
    const CoverageReport coverage =
        coverage_experiment(replicates, bootstrap, useed);
    const TypeIReport type1 = type1_experiment(4 * replicates, useed + 1);
    if (json) {
        nlohmann::json j;
        j["coverage"] = coverage_to_json(coverage);
        j["type1"] = type1_to_json(type1);
        j["pass"] = coverage.pass && type1.pass;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << render_validation(coverage, type1);
    }
    return coverage.pass && type1.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"evalforge: data-parallel LLM evaluation with caching and "
                 "statistically grounded reporting"};
    app.require_subcommand(1);

    RunArgs run_args;
    CLI::App* run = app.add_subcommand("run", "Execute an evaluation task");
    run->add_option("--task", run_args.task_path, "Task config JSON")->required();
    run->add_option("--data", run_args.data_override, "Dataset path override");
    run->add_option("--cache-dir", run_args.cache_dir_override,
                    "Cache directory override");
    auto* seed_opt =
        run->add_option("--seed", run_args.seed, "RNG seed override");
    run->add_option("--workers", run_args.workers, "Worker count override")
        ->check(CLI::PositiveNumber);
    run->add_option("--runs-root", run_args.runs_root,
                    "Directory for run records");
    run->add_flag("--json", run_args.json, "Machine-readable output");
    run->add_flag("--canonical", run_args.canonical,
                  "Zero timestamps in --json output (determinism checks)");

    CompareArgs cmp_args;
    CLI::App* cmp = app.add_subcommand("compare", "Compare two run records");
    cmp->add_option("--run-a", cmp_args.run_a, "First run record directory")
        ->required();
    cmp->add_option("--run-b", cmp_args.run_b, "Second run record directory")
        ->required();
    cmp->add_option("--metric", cmp_args.metric, "Metric to compare")->required();
    auto* alpha_opt = cmp->add_option("--alpha", cmp_args.alpha,
                                      "Significance level override");
    cmp->add_flag("--json", cmp_args.json, "Machine-readable output");

    std::string cache_dir = "evalforge_cache";
    bool cache_json = false;
    CLI::App* cache = app.add_subcommand("cache", "Cache maintenance");
    cache->require_subcommand(1);
    CLI::App* cache_stats = cache->add_subcommand("stats", "Show cache statistics");
    CLI::App* cache_purge =
        cache->add_subcommand("purge", "Drop expired and superseded records");
    for (CLI::App* sub : {cache_stats, cache_purge}) {
        sub->add_option("--cache-dir", cache_dir, "Cache directory");
        sub->add_flag("--json", cache_json, "Machine-readable output");
    }

    int vs_replicates = 500;
    int vs_bootstrap = 1000;
    std::int64_t vs_seed = 0;
    bool vs_json = false;
    CLI::App* validate = app.add_subcommand(
        "validate-stats", "Monte Carlo checks of CI coverage and Type-I error");
    validate->add_option("--replicates", vs_replicates,
                         "Coverage replicates (Type-I uses 4x)")
        ->check(CLI::PositiveNumber);
    validate->add_option("--bootstrap", vs_bootstrap, "Bootstrap iterations")
        ->check(CLI::PositiveNumber);
    validate->add_option("--seed", vs_seed, "RNG seed");
    validate->add_flag("--json", vs_json, "Machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    run_args.seed_set = seed_opt->count() > 0;
    cmp_args.alpha_set = alpha_opt->count() > 0;

    if (*run) return guarded([&] { return cmd_run(run_args); });
    if (*cmp) return guarded([&] { return cmd_compare(cmp_args); });
    if (*cache_stats)
        return guarded([&] { return cmd_cache_stats(cache_dir, cache_json); });
    if (*cache_purge)
        return guarded([&] { return cmd_cache_purge(cache_dir, cache_json); });
    if (*validate) {
        return guarded([&] {
            return cmd_validate_stats(vs_replicates, vs_bootstrap, vs_seed,
                                      vs_json);
        });
    }
    return 2;
}
