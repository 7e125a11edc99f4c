/// @file runner.cpp
/// Worker-pool evaluation pipeline, model comparison, throughput
/// simulation, and run-record serialization.

#include "evalforge/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "evalforge/errors.hpp"
#include "evalforge/metrics_registry.hpp"
#include "evalforge/ratelimit.hpp"

namespace evalforge {
namespace {

/// FNV-1a 64-bit; derives a per-metric seed stream from the run seed so
/// adding a metric never perturbs another metric's bootstrap draws.
std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

/// Applies the worker's rate limiter ahead of every real provider call.
/// Sits inside the cache resolver so cache hits never spend budget.
class LimitedEngine final : public InferenceEngine {
public:
    LimitedEngine(InferenceEngine& inner, RateLimiter& limiter)
        : inner_(inner), limiter_(limiter) {}

    InferenceResponse infer(const InferenceRequest& request) override {
        limiter_.acquire(static_cast<double>(
            estimate_tokens(request.prompt, request.max_tokens)));
        return inner_.infer(request);
    }

private:
    InferenceEngine& inner_;
    RateLimiter& limiter_;
};

/// Cache-resolving front for one worker: every call (primary inference
/// or judge sub-call) goes lookup -> rate limit -> provider -> write-back
/// per the configured policy. Accumulates spend and remembers the first
/// replay miss so the worker can abort.
class ResolvingEngine final : public InferenceEngine {
public:
    ResolvingEngine(CachePolicy policy, CacheStore* store, const ModelConfig& model,
                    std::optional<std::int64_t> ttl_days, InferenceEngine& limited,
                    Clock& clock)
        : policy_(policy),
          store_(store),
          model_(model),
          ttl_days_(ttl_days),
          limited_(limited),
          clock_(clock) {}

    InferenceResponse infer(const InferenceRequest& request) override {
        InferenceResponse response =
            resolve(policy_, store_, model_, request, limited_,
                    static_cast<double>(clock_.unix_seconds()), ttl_days_);
        if (response.cost) cost_ += *response.cost;
        if (!response.ok() && response.error->kind == FailureKind::cache_miss &&
            !replay_miss_) {
            replay_miss_ = response.error;
        }
        return response;
    }

    double cost() const { return cost_; }
    const std::optional<FailureRecord>& replay_miss() const { return replay_miss_; }

private:
    CachePolicy policy_;
    CacheStore* store_;
    ModelConfig model_;
    std::optional<std::int64_t> ttl_days_;
    InferenceEngine& limited_;
    Clock& clock_;
    double cost_ = 0.0;
    std::optional<FailureRecord> replay_miss_;
};

struct ExampleOutcome {
    InferenceResponse response;
    std::vector<ScoredExample> scores;
};

struct WorkerReport {
    double cost = 0.0;
    std::optional<std::size_t> replay_miss_index;
    FailureRecord replay_miss;
};

void run_worker(const EvalTask& task, const std::vector<Example>& examples,
                std::size_t begin, std::size_t count, int worker_id,
                CacheStore* store, EngineEnv env, Embedder* shared_embedder,
                std::vector<ExampleOutcome>& outcomes, WorkerReport& report,
                std::atomic<bool>& abort_flag) {
    SystemClock fallback_clock;
    Clock& clock = env.clock ? *env.clock : fallback_clock;
    env.clock = &clock;

    RateLimiter limiter(static_cast<double>(task.inference.rate_limit_rpm),
                        static_cast<double>(task.inference.rate_limit_tpm),
                        task.inference.num_workers, clock);
    auto raw = make_engine(task.model, task.inference, env,
                           static_cast<std::uint64_t>(worker_id));
    LimitedEngine limited(*raw, limiter);
    ResolvingEngine engine(task.inference.cache_policy, store, task.model,
                           task.inference.cache_ttl_days, limited, clock);

    DeterministicEmbedder local_embedder;
    Embedder* embedder = shared_embedder ? shared_embedder : &local_embedder;

    auto note_replay_miss = [&](std::size_t index) {
        if (!report.replay_miss_index || index < *report.replay_miss_index) {
            report.replay_miss_index = index;
            report.replay_miss = *engine.replay_miss();
        }
        abort_flag.store(true);
    };

    const std::size_t end = begin + count;
    const auto batch = static_cast<std::size_t>(task.inference.batch_size);
    std::size_t pos = begin;
    while (pos < end && !abort_flag.load()) {
        const std::size_t stop = std::min(end, pos + batch);

        for (std::size_t i = pos; i < stop; ++i) {
            if (abort_flag.load()) break;
            const Example& ex = examples[i];
            InferenceRequest request;
            request.prompt = ex.rendered_prompt;
            request.temperature = task.model.temperature;
            request.max_tokens = task.model.max_tokens;
            request.request_id = ex.example_id;
            outcomes[i].response = engine.infer(request);
            if (engine.replay_miss()) {
                note_replay_miss(i);
                break;
            }
        }

        for (std::size_t i = pos; i < stop; ++i) {
            if (abort_flag.load()) break;
            ExampleOutcome& out = outcomes[i];
            if (!out.response.ok()) continue;
            MetricInputs in;
            in.example = &examples[i];
            in.response = &out.response;
            in.judge = &engine;
            in.embedder = embedder;
            out.scores.reserve(task.metrics.size());
            for (const MetricConfig& metric : task.metrics) {
                ScoredExample scored;
                try {
                    scored = score_metric(metric, in);
                } catch (const std::exception& e) {
                    scored.example_id = examples[i].example_id;
                    scored.metric_name = metric.name;
                    scored.parse_failed = true;
                    scored.detail = e.what();
                }
                out.scores.push_back(std::move(scored));
                if (engine.replay_miss()) {
                    note_replay_miss(i);
                    break;
                }
            }
        }
        pos = stop;
    }

    report.cost = engine.cost();
}

std::string model_name_of(const EvalResult& result) {
    if (result.config_snapshot.empty()) return "";
    try {
        return parse_task(result.config_snapshot).model.model_name;
    } catch (const std::exception&) {
        return "";
    }
}

nlohmann::json metric_value_to_json(const MetricValue& mv) {
    nlohmann::json j;
    if (mv.n > 0) {
        j["value"] = mv.value;
        j["ci_lower"] = mv.ci_lower;
        j["ci_upper"] = mv.ci_upper;
    } else {
        j["value"] = nullptr;
        j["ci_lower"] = nullptr;
        j["ci_upper"] = nullptr;
    }
    j["n"] = mv.n;
    j["ci_method"] = to_string(mv.ci_method);
    j["excluded"] = mv.excluded;
    return j;
}

MetricValue metric_value_from_json(const nlohmann::json& j) {
    MetricValue mv;
    mv.n = j.at("n").get<std::int64_t>();
    mv.excluded = j.at("excluded").get<std::int64_t>();
    if (mv.n > 0) {
        mv.value = j.at("value").get<double>();
        mv.ci_lower = j.at("ci_lower").get<double>();
        mv.ci_upper = j.at("ci_upper").get<double>();
    }
    const std::string method = j.at("ci_method").get<std::string>();
    if (method == "bca") {
        mv.ci_method = CiKind::bca;
    } else if (method == "analytical_t") {
        mv.ci_method = CiKind::analytical_t;
    } else if (method == "wilson") {
        mv.ci_method = CiKind::wilson;
    } else {
        mv.ci_method = CiKind::percentile;
    }
    return mv;
}

nlohmann::json scored_to_json(const ScoredExample& s) {
    nlohmann::json j;
    j["example_id"] = s.example_id;
    j["metric"] = s.metric_name;
    j["score"] = s.score;
    j["detail"] = s.detail ? nlohmann::json(*s.detail) : nlohmann::json(nullptr);
    j["parse_failed"] = s.parse_failed;
    return j;
}

ScoredExample scored_from_json(const nlohmann::json& j) {
    ScoredExample s;
    s.example_id = j.at("example_id").get<std::string>();
    s.metric_name = j.at("metric").get<std::string>();
    s.score = j.at("score").get<double>();
    if (!j.at("detail").is_null()) s.detail = j.at("detail").get<std::string>();
    s.parse_failed = j.at("parse_failed").get<bool>();
    return s;
}

FailureKind failure_kind_from_string(const std::string& s) {
    static const std::map<std::string, FailureKind> kinds = {
        {"rate_limited", FailureKind::rate_limited},
        {"server_error", FailureKind::server_error},
        {"auth_error", FailureKind::auth_error},
        {"invalid_request", FailureKind::invalid_request},
        {"content_policy", FailureKind::content_policy},
        {"network", FailureKind::network},
        {"parse", FailureKind::parse},
        {"cache_miss", FailureKind::cache_miss},
    };
    const auto it = kinds.find(s);
    return it == kinds.end() ? FailureKind::network : it->second;
}

nlohmann::json failure_to_json(const FailureEntry& f) {
    nlohmann::json j;
    j["example_id"] = f.example_id;
    j["kind"] = to_string(f.record.kind);
    j["http_status"] = f.record.http_status ? nlohmann::json(*f.record.http_status)
                                            : nlohmann::json(nullptr);
    j["message"] = f.record.message;
    j["attempts"] = f.record.attempts;
    return j;
}

FailureEntry failure_from_json(const nlohmann::json& j) {
    FailureEntry f;
    f.example_id = j.at("example_id").get<std::string>();
    f.record.kind = failure_kind_from_string(j.at("kind").get<std::string>());
    if (!j.at("http_status").is_null())
        f.record.http_status = j.at("http_status").get<int>();
    f.record.message = j.at("message").get<std::string>();
    f.record.attempts = j.at("attempts").get<int>();
    return f;
}

nlohmann::json cache_stats_to_json(const CacheStats& s) {
    nlohmann::json j;
    j["lookups"] = s.lookups;
    j["hits"] = s.hits;
    j["misses"] = s.misses;
    j["writes"] = s.writes;
    j["expired_skips"] = s.expired_skips;
    return j;
}

CacheStats cache_stats_from_json(const nlohmann::json& j) {
    CacheStats s;
    s.lookups = j.at("lookups").get<std::int64_t>();
    s.hits = j.at("hits").get<std::int64_t>();
    s.misses = j.at("misses").get<std::int64_t>();
    s.writes = j.at("writes").get<std::int64_t>();
    s.expired_skips = j.at("expired_skips").get<std::int64_t>();
    return s;
}

nlohmann::json test_result_to_json(const TestResult& t) {
    nlohmann::json j;
    j["name"] = to_string(t.test);
    j["statistic"] = std::isfinite(t.statistic)
                         ? nlohmann::json(t.statistic)
                         : nlohmann::json(t.statistic > 0 ? "inf" : "-inf");
    j["p_value"] = t.p_value;
    j["n_effective"] = t.n_effective;
    j["significant"] = t.significant;
    j["degenerate"] = t.degenerate;
    return j;
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> partition(std::size_t count,
                                                           int num_workers) {
    if (num_workers < 1) throw std::invalid_argument("num_workers must be >= 1");
    const auto workers = static_cast<std::size_t>(num_workers);
    std::vector<std::pair<std::size_t, std::size_t>> chunks;
    chunks.reserve(workers);
    const std::size_t base = count / workers;
    const std::size_t extra = count % workers;
    std::size_t offset = 0;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t len = base + (w < extra ? 1 : 0);
        chunks.emplace_back(offset, len);
        offset += len;
    }
    return chunks;
}

EvalResult evaluate(const EvalTask& task, const std::vector<Example>& examples,
                    RunEnv* env) {
    RunEnv local_env;
    if (!env) env = &local_env;

    SystemClock wall;
    EvalResult result;
    result.task_id = task.task_id;
    result.config_snapshot = serialize_task(task);
    result.total_examples = static_cast<std::int64_t>(examples.size());
    result.started_at = static_cast<double>(wall.unix_seconds());

    std::unique_ptr<CacheStore> owned_store;
    CacheStore* store = env->cache;
    if (!store && task.inference.cache_policy != CachePolicy::disabled) {
        owned_store = std::make_unique<CacheStore>(task.inference.cache_dir);
        store = owned_store.get();
    }
    const CacheStats stats_before = store ? store->stats() : CacheStats{};

    const int workers = task.inference.num_workers;
    const auto chunks = partition(examples.size(), workers);
    std::vector<ExampleOutcome> outcomes(examples.size());
    std::vector<WorkerReport> reports(static_cast<std::size_t>(workers));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::atomic<bool> abort_flag{false};

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        EngineEnv worker_env = env->engines;
        if (env->worker_clock) worker_env.clock = env->worker_clock(w);
        pool.emplace_back([&, w, worker_env] {
            const auto wi = static_cast<std::size_t>(w);
            try {
                run_worker(task, examples, chunks[wi].first, chunks[wi].second, w,
                           store, worker_env, env->embedder, outcomes, reports[wi],
                           abort_flag);
            } catch (...) {
                errors[wi] = std::current_exception();
                abort_flag.store(true);
            }
        });
    }
    for (auto& t : pool) t.join();

    for (const auto& error : errors) {
        if (error) std::rethrow_exception(error);
    }

    if (abort_flag.load()) {
        std::optional<std::size_t> first;
        for (const auto& r : reports) {
            if (r.replay_miss_index && (!first || *r.replay_miss_index < *first))
                first = *r.replay_miss_index;
        }
        const std::string id = first ? examples[*first].example_id : "<unknown>";
        throw RunAbort("replay cache miss for example " + id);
    }

    for (const auto& r : reports) result.total_cost += r.cost;

    std::map<std::string, std::vector<double>> included;
    std::map<std::string, std::int64_t> excluded;
    for (const MetricConfig& metric : task.metrics) {
        included[metric.name];
        excluded[metric.name] = 0;
    }
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        ExampleOutcome& out = outcomes[i];
        if (!out.response.ok()) {
            result.failed_examples += 1;
            result.failures.push_back(
                FailureEntry{examples[i].example_id, *out.response.error});
            continue;
        }
        for (ScoredExample& s : out.scores) {
            if (s.parse_failed) {
                excluded[s.metric_name] += 1;
                result.excluded_unparseable += 1;
            } else {
                included[s.metric_name].push_back(s.score);
            }
            result.per_example.push_back(std::move(s));
        }
    }

    for (const MetricConfig& metric : task.metrics) {
        const auto& scores = included[metric.name];
        const std::uint64_t seed =
            task.statistics.effective_seed() ^ fnv1a64(metric.name);
        result.per_metric[metric.name] =
            aggregate_scores(scores, metrics::is_binary(metric.name),
                             task.statistics, excluded[metric.name], seed);
    }

    if (store) {
        const CacheStats after = store->stats();
        result.cache_stats.lookups = after.lookups - stats_before.lookups;
        result.cache_stats.hits = after.hits - stats_before.hits;
        result.cache_stats.misses = after.misses - stats_before.misses;
        result.cache_stats.writes = after.writes - stats_before.writes;
        result.cache_stats.expired_skips =
            after.expired_skips - stats_before.expired_skips;
    }
    result.finished_at = static_cast<double>(wall.unix_seconds());
    return result;
}

ComparisonResult compare(const EvalResult& result_a, const EvalResult& result_b,
                         const std::string& metric_name,
                         const StatisticsConfig& cfg) {
    if (!metrics::is_registered(metric_name))
        throw ConfigError("metric", "unregistered metric " + metric_name);

    std::map<std::string, double> by_id_a;
    for (const auto& s : result_a.per_example) {
        if (s.metric_name == metric_name && !s.parse_failed)
            by_id_a[s.example_id] = s.score;
    }
    std::vector<double> a;
    std::vector<double> b;
    for (const auto& s : result_b.per_example) {
        if (s.metric_name != metric_name || s.parse_failed) continue;
        const auto it = by_id_a.find(s.example_id);
        if (it == by_id_a.end()) continue;
        a.push_back(it->second);
        b.push_back(s.score);
    }
    const auto n = static_cast<std::int64_t>(a.size());
    if (n < 2)
        throw RunAbort("fewer than two complete paired examples for metric " +
                       metric_name);

    const bool binary = metrics::is_binary(metric_name);
    std::optional<bool> differences_normal;
    if (!binary) {
        std::vector<double> diffs(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) diffs[i] = a[i] - b[i];
        const NormalityResult norm = normality_check(diffs);
        if (norm.available) differences_normal = norm.is_normal;
    }

    ComparisonResult out;
    out.metric_name = metric_name;
    out.paired_n = n;
    out.model_a = model_name_of(result_a);
    out.model_b = model_name_of(result_b);
    if (const auto it = result_a.per_metric.find(metric_name);
        it != result_a.per_metric.end())
        out.value_a = it->second;
    if (const auto it = result_b.per_metric.find(metric_name);
        it != result_b.per_metric.end())
        out.value_b = it->second;

    out.recommended_test = select_test(binary, n, differences_normal);
    const double alpha = cfg.significance_alpha;
    switch (out.recommended_test) {
        case SelectedTest::mcnemar:
            out.test = mcnemar_test(a, b, alpha);
            break;
        case SelectedTest::paired_t:
            out.test = paired_t_test(a, b, alpha);
            break;
        case SelectedTest::wilcoxon:
            out.test = wilcoxon_signed_rank(a, b, alpha);
            break;
        case SelectedTest::permutation:
            out.test = permutation_test(a, b, cfg.bootstrap_iterations,
                                        cfg.effective_seed(), alpha);
            break;
    }
    out.effects = effect_sizes(a, b, binary);
    if (out.test.degenerate && out.recommended_test != SelectedTest::permutation) {
        out.fallback_permutation = permutation_test(
            a, b, cfg.bootstrap_iterations, cfg.effective_seed(), alpha);
    }
    return out;
}

double simulate_throughput(int num_workers, double latency_seconds,
                           std::optional<double> rpm, std::optional<double> tpm,
                           int n_examples) {
    if (num_workers < 1) throw std::invalid_argument("num_workers must be >= 1");
    if (n_examples < 1) throw std::invalid_argument("n_examples must be >= 1");

    EvalTask task;
    task.task_id = "throughput-sim";
    task.model.provider = Provider::mock;
    task.model.model_name = "sim";
    task.model.max_tokens = 16;
    task.inference.num_workers = num_workers;
    task.inference.cache_policy = CachePolicy::disabled;
    task.inference.max_retries = 0;
    task.inference.rate_limit_rpm =
        rpm ? static_cast<std::int64_t>(std::llround(*rpm)) : 1000000000000LL;
    task.inference.rate_limit_tpm =
        tpm ? static_cast<std::int64_t>(std::llround(*tpm)) : 1000000000000LL;
    task.statistics.ci_method = CiMethod::analytical;
    MetricConfig metric;
    metric.name = "exact_match";
    metric.type = MetricFamily::lexical;
    task.metrics.push_back(metric);

    std::vector<Example> examples(static_cast<std::size_t>(n_examples));
    for (std::size_t i = 0; i < examples.size(); ++i) {
        examples[i].example_id = "sim-" + std::to_string(i);
        examples[i].rendered_prompt = "echo:ok";
        examples[i].reference = "ok";
    }

    std::vector<std::unique_ptr<SimulatedClock>> clocks;
    clocks.reserve(static_cast<std::size_t>(num_workers));
    for (int w = 0; w < num_workers; ++w)
        clocks.push_back(std::make_unique<SimulatedClock>());

    RunEnv env;
    env.engines.mock_latency_seconds = latency_seconds;
    env.worker_clock = [&clocks](int w) {
        return clocks[static_cast<std::size_t>(w)].get();
    };
    evaluate(task, examples, &env);

    double slowest = 0.0;
    for (const auto& clock : clocks) slowest = std::max(slowest, clock->now_seconds());
    if (slowest <= 0.0) return std::numeric_limits<double>::infinity();
    return static_cast<double>(n_examples) / slowest * 60.0;
}

nlohmann::json result_to_json(const EvalResult& result, bool canonical) {
    nlohmann::json j;
    j["task_id"] = result.task_id;
    j["started_at"] = canonical ? 0.0 : result.started_at;
    j["finished_at"] = canonical ? 0.0 : result.finished_at;

    nlohmann::json metrics = nlohmann::json::object();
    nlohmann::json logged = nlohmann::json::object();
    for (const auto& [name, mv] : result.per_metric) {
        metrics[name] = metric_value_to_json(mv);
        if (mv.n > 0) {
            logged[name] = mv.value;
            logged[name + "_ci_lower"] = mv.ci_lower;
            logged[name + "_ci_upper"] = mv.ci_upper;
        }
    }
    j["metrics"] = metrics;
    j["logged_fields"] = logged;

    nlohmann::json examples = nlohmann::json::array();
    for (const auto& s : result.per_example) examples.push_back(scored_to_json(s));
    j["examples"] = examples;

    nlohmann::json failures = nlohmann::json::array();
    for (const auto& f : result.failures) failures.push_back(failure_to_json(f));
    j["failures"] = failures;

    j["cache"] = cache_stats_to_json(result.cache_stats);
    j["totals"] = {
        {"examples", result.total_examples},
        {"failed", result.failed_examples},
        {"excluded_unparseable", result.excluded_unparseable},
        {"cost", result.total_cost},
    };
    j["config"] = result.config_snapshot.empty()
                      ? nlohmann::json(nullptr)
                      : nlohmann::json::parse(result.config_snapshot);
    return j;
}

nlohmann::json comparison_to_json(const ComparisonResult& result) {
    nlohmann::json j;
    j["metric"] = result.metric_name;
    j["model_a"] = result.model_a;
    j["model_b"] = result.model_b;
    j["value_a"] = metric_value_to_json(result.value_a);
    j["value_b"] = metric_value_to_json(result.value_b);
    j["paired_n"] = result.paired_n;
    j["recommended_test"] = to_string(result.recommended_test);
    j["test"] = test_result_to_json(result.test);
    j["fallback_permutation"] =
        result.fallback_permutation
            ? test_result_to_json(*result.fallback_permutation)
            : nlohmann::json(nullptr);
    nlohmann::json effects;
    effects["cohens_d"] = result.effects.cohens_d
                              ? nlohmann::json(*result.effects.cohens_d)
                              : nlohmann::json(nullptr);
    effects["hedges_g"] = result.effects.hedges_g
                              ? nlohmann::json(*result.effects.hedges_g)
                              : nlohmann::json(nullptr);
    effects["odds_ratio"] = result.effects.odds_ratio
                                ? nlohmann::json(*result.effects.odds_ratio)
                                : nlohmann::json(nullptr);
    j["effect_sizes"] = effects;
    return j;
}

std::string write_run_record(const EvalTask& task, const EvalResult& result,
                             const std::string& runs_root,
                             const std::string& label) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::path(runs_root) / task.task_id / label;
    fs::create_directories(dir);

    {
        std::ofstream f(dir / "result.json", std::ios::binary);
        if (!f) throw RunAbort("cannot write " + (dir / "result.json").string());
        f << result_to_json(result, false).dump(2) << "\n";
    }
    {
        std::ofstream f(dir / "config.json", std::ios::binary);
        f << serialize_task(task);
    }
    {
        std::ofstream f(dir / "scores.jsonl", std::ios::binary);
        for (const auto& s : result.per_example) f << scored_to_json(s).dump() << "\n";
    }
    {
        std::ofstream f(dir / "failures.jsonl", std::ios::binary);
        for (const auto& fe : result.failures)
            f << failure_to_json(fe).dump() << "\n";
    }
    return dir.string();
}

EvalResult load_run_record(const std::string& run_dir) {
    namespace fs = std::filesystem;
    const fs::path path = fs::path(run_dir) / "result.json";
    std::ifstream f(path, std::ios::binary);
    if (!f) throw RunAbort("run record not found: " + path.string());
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw RunAbort("malformed run record " + path.string() + ": " + e.what());
    }

    EvalResult result;
    try {
        result.task_id = j.at("task_id").get<std::string>();
        result.started_at = j.at("started_at").get<double>();
        result.finished_at = j.at("finished_at").get<double>();
        for (const auto& [name, mv] : j.at("metrics").items())
            result.per_metric[name] = metric_value_from_json(mv);
        for (const auto& s : j.at("examples"))
            result.per_example.push_back(scored_from_json(s));
        for (const auto& fe : j.at("failures"))
            result.failures.push_back(failure_from_json(fe));
        result.cache_stats = cache_stats_from_json(j.at("cache"));
        const auto& totals = j.at("totals");
        result.total_examples = totals.at("examples").get<std::int64_t>();
        result.failed_examples = totals.at("failed").get<std::int64_t>();
        result.excluded_unparseable =
            totals.at("excluded_unparseable").get<std::int64_t>();
        result.total_cost = totals.at("cost").get<double>();
        if (!j.at("config").is_null())
            result.config_snapshot = serialize_task(
                parse_task(j.at("config").dump()));
    } catch (const nlohmann::json::exception& e) {
        throw RunAbort("malformed run record " + path.string() + ": " + e.what());
    }
    return result;
}

}  // namespace evalforge
