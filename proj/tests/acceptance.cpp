/// @file acceptance.cpp
/// Standalone acceptance gate. Each check exercises one headline
/// guarantee of the engine end to end and prints a single [PASS]/[FAIL]
/// line with the measured numbers and the pinned tolerance. The process
/// exits nonzero if any check fails.

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "evalforge/clock.hpp"
#include "evalforge/errors.hpp"
#include "evalforge/metrics.hpp"
#include "evalforge/provider.hpp"
#include "evalforge/ratelimit.hpp"
#include "evalforge/runner.hpp"
#include "evalforge/stats.hpp"
#include "evalforge/validation.hpp"

using namespace evalforge;
namespace fs = std::filesystem;

namespace {

struct Check {
    bool pass = false;
    std::string detail;
};

std::string strf(const char* format, ...) {
    char buf[1024];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

nlohmann::json load_fixture(const std::string& name) {
    const std::string path = std::string(EVALFORGE_FIXTURE_DIR) + "/" + name;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("missing fixture " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

/// Unique scratch root, removed on destruction.
struct Scratch {
    fs::path root;

    Scratch() {
        root = fs::temp_directory_path() /
               ("evalforge-acceptance-" + std::to_string(::getpid()));
        fs::remove_all(root);
        fs::create_directories(root);
    }

    ~Scratch() {
        std::error_code ec;
        fs::remove_all(root, ec);
    }

    std::string dir(const std::string& leaf) const { return (root / leaf).string(); }
};

MetricFamily family_of(const std::string& name) {
    if (name == "embedding_similarity") return MetricFamily::semantic;
    if (name == "judge_pointwise") return MetricFamily::llm_judge;
    return MetricFamily::lexical;
}

EvalTask mock_task(const std::vector<std::string>& metric_names, int workers,
                   CachePolicy policy, const std::string& cache_dir) {
    EvalTask t;
    t.task_id = "acceptance";
    t.model.provider = Provider::mock;
    t.model.model_name = "mock-model";
    t.model.max_tokens = 32;
    t.inference.num_workers = workers;
    t.inference.batch_size = 50;
    t.inference.max_retries = 0;
    t.inference.cache_policy = policy;
    t.inference.cache_dir = cache_dir;
    // In-memory mock runs sleep real time on limiter waits; keep them at ns.
    t.inference.rate_limit_rpm = 600000000;
    t.inference.rate_limit_tpm = 2000000000;
    t.data.input_path = "mem.jsonl";
    t.data.prompt_template = "{q}";
    for (const auto& name : metric_names) {
        MetricConfig m;
        m.name = name;
        m.type = family_of(name);
        t.metrics.push_back(m);
    }
    return t;
}

std::vector<Example> echo_examples(int n, const std::string& prefix) {
    std::vector<Example> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto& e = out[static_cast<std::size_t>(i)];
        e.example_id = "ex-" + std::to_string(i);
        e.rendered_prompt = "echo:" + prefix + std::to_string(i);
        e.reference = prefix + std::to_string(i);
    }
    return out;
}

/// Exact signed-rank reference: average ranks of the nonzero
/// |differences|, then the distribution of W = min(W+, W-) over all 2^n
/// sign assignments.
double brute_force_wilcoxon_p(std::vector<double> diffs) {
    diffs.erase(std::remove(diffs.begin(), diffs.end(), 0.0), diffs.end());
    const std::size_t n = diffs.size();
    if (n == 0 || n > 16) throw std::runtime_error("wilcoxon reference needs 1<=n<=16");

    std::vector<double> mags(n);
    for (std::size_t i = 0; i < n; ++i) mags[i] = std::fabs(diffs[i]);
    std::vector<double> sorted = mags;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> ranks(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto lo =
            std::lower_bound(sorted.begin(), sorted.end(), mags[i]) - sorted.begin();
        const auto hi =
            std::upper_bound(sorted.begin(), sorted.end(), mags[i]) - sorted.begin();
        ranks[i] = (static_cast<double>(lo) + 1.0 + static_cast<double>(hi)) / 2.0;
    }

    double w_plus = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        total += ranks[i];
        if (diffs[i] > 0) w_plus += ranks[i];
    }
    const double w_obs = std::min(w_plus, total - w_plus);

    std::uint64_t hits = 0;
    const std::uint64_t combos = 1ULL << n;
    for (std::uint64_t mask = 0; mask < combos; ++mask) {
        double wp = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1ULL << i)) wp += ranks[i];
        if (std::min(wp, total - wp) <= w_obs + 1e-12) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(combos);
}

/// Exhaustive sign-flip reference for the permutation test.
double brute_force_permutation_p(const std::vector<double>& a,
                                 const std::vector<double>& b) {
    const std::size_t n = a.size();
    if (n == 0 || n > 12) throw std::runtime_error("permutation reference needs n<=12");
    std::vector<double> diffs(n);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        diffs[i] = a[i] - b[i];
        mean += diffs[i];
    }
    mean /= static_cast<double>(n);
    const double observed = std::fabs(mean);

    std::uint64_t at_least = 0;
    const std::uint64_t combos = 1ULL << n;
    for (std::uint64_t mask = 0; mask < combos; ++mask) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            sum += (mask & (1ULL << i)) ? -diffs[i] : diffs[i];
        if (std::fabs(sum / static_cast<double>(n)) >= observed - 1e-15) ++at_least;
    }
    return static_cast<double>(at_least) / static_cast<double>(combos);
}

/// Binary score vectors realizing discordant counts (b, c) plus
/// concordant padding on both sides.
std::pair<std::vector<double>, std::vector<double>> discordant_pairs(int b, int c) {
    std::vector<double> sa, sb;
    for (int i = 0; i < b; ++i) {
        sa.push_back(1.0);
        sb.push_back(0.0);
    }
    for (int i = 0; i < c; ++i) {
        sa.push_back(0.0);
        sb.push_back(1.0);
    }
    for (int i = 0; i < 3; ++i) {
        sa.push_back(1.0);
        sb.push_back(1.0);
        sa.push_back(0.0);
        sb.push_back(0.0);
    }
    return {sa, sb};
}

// 1. >= 500 log-normal(sigma=0.5) replicates at n in {50, 200}: BCa
// coverage at n=200 within [92.5%, 97.5%], percentile strictly below BCa
// at n=50, single-threaded in under 5 minutes.
Check check_coverage(Scratch&) {
    const auto t0 = std::chrono::steady_clock::now();
    const CoverageReport report = coverage_experiment(500, 1000, 0);
    const double elapsed = seconds_since(t0);

    const auto& r50 = report.rows.at(0);
    const auto& r200 = report.rows.at(1);
    Check c;
    c.pass = report.pass && r50.n == 50 && r200.n == 200 &&
             r50.replicates == 500 && r200.replicates == 500 && elapsed < 300.0;
    c.detail = strf(
        "n=50 percentile %.1f%% < bca %.1f%%; n=200 bca %.1f%% in [92.5, 97.5] "
        "(percentile %.1f%%); 500 replicates in %.1fs (limit 300s)",
        100.0 * r50.percentile_coverage, 100.0 * r50.bca_coverage,
        100.0 * r200.bca_coverage, 100.0 * r200.percentile_coverage, elapsed);
    return c;
}

// 2. >= 2000 null paired comparisons per test: rejection rate at
// alpha=0.05 within [3.5%, 6.5%] for paired t, McNemar, Wilcoxon, in
// under 2 minutes.
Check check_type1(Scratch&) {
    const auto t0 = std::chrono::steady_clock::now();
    const TypeIReport report = type1_experiment(2000, 1);
    const double elapsed = seconds_since(t0);

    Check c;
    c.pass = report.pass && elapsed < 120.0;
    std::string rates;
    for (const auto& row : report.rows) {
        if (c.pass && row.replicates != 2000) c.pass = false;
        rates += strf("%s %.2f%% ", row.test.c_str(), 100.0 * row.rejection_rate);
    }
    c.detail = strf("%sall in [3.5, 6.5] over 2000 nulls each; %.1fs (limit 120s)",
                    rates.c_str(), elapsed);
    return c;
}

// 3. 1000-example cached run, re-run with a changed metric list: zero
// provider calls, 1000 hits, zero incremental cost. Replay on a cold
// cache aborts naming the first missing example.
Check check_replay_economics(Scratch& scratch) {
    const auto examples = echo_examples(1000, "w");

    auto cold_task = mock_task({"exact_match"}, 4, CachePolicy::enabled,
                               scratch.dir("warm-cache"));
    cold_task.model.price_per_1m_input = 2.50;
    cold_task.model.price_per_1m_output = 15.00;
    std::atomic<std::int64_t> calls{0};
    RunEnv env;
    env.engines.provider_calls = &calls;
    const EvalResult cold = evaluate(cold_task, examples, &env);
    const bool cold_ok =
        calls.load() == 1000 && cold.cache_stats.writes == 1000 && cold.total_cost > 0.0;

    auto warm_task = cold_task;
    warm_task.metrics.clear();
    for (const auto& name : {"exact_match", "token_f1"}) {
        MetricConfig m;
        m.name = name;
        m.type = MetricFamily::lexical;
        warm_task.metrics.push_back(m);
    }
    calls = 0;
    const EvalResult warm = evaluate(warm_task, examples, &env);
    const bool warm_ok = calls.load() == 0 && warm.cache_stats.hits == 1000 &&
                         warm.total_cost == 0.0;

    auto replay_task = mock_task({"exact_match"}, 4, CachePolicy::replay,
                                 scratch.dir("cold-cache"));
    std::string abort_message = "(no abort)";
    try {
        evaluate(replay_task, examples, &env);
    } catch (const RunAbort& e) {
        abort_message = e.what();
    }
    const bool abort_ok = abort_message == "replay cache miss for example ex-0";

    Check c;
    c.pass = cold_ok && warm_ok && abort_ok;
    c.detail = strf(
        "cold: 1000 calls, %lld writes, $%.4f; warm rerun with changed metrics: "
        "%lld calls, %lld hits, $%.2f; cold replay aborted with \"%s\"",
        static_cast<long long>(cold.cache_stats.writes), cold.total_cost,
        static_cast<long long>(calls.load()),
        static_cast<long long>(warm.cache_stats.hits), warm.total_cost,
        abort_message.c_str());
    return c;
}

// 4. Simulated clock: one worker at 600 RPM never exceeds 601 grants in
// any sliding 60 s window over 10 minutes; 8 workers sharing 10000 RPM
// sustain between 9000 and 10000 grants/min; both in under 10 s of wall
// time.
Check check_rate_limit(Scratch&) {
    const auto t0 = std::chrono::steady_clock::now();

    SimulatedClock clk;
    RateLimiter limiter(600.0, 1e9, 1, clk);
    std::vector<double> grants;
    while (clk.now_seconds() < 600.0) {
        limiter.acquire(40.0);
        grants.push_back(clk.now_seconds());
    }
    std::size_t max_in_window = 0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < grants.size(); ++i) {
        while (grants[i] - grants[j] > 60.0 + 1e-9) ++j;
        max_in_window = std::max(max_in_window, i - j + 1);
    }
    const bool window_ok = max_in_window <= 601;

    double aggregate_per_min = 0.0;
    for (int w = 0; w < 8; ++w) {
        SimulatedClock wc;
        RateLimiter wl(10000.0, 1e9, 8, wc);
        std::int64_t steady = 0;
        while (wc.now_seconds() < 660.0) {
            wl.acquire(40.0);
            const double t = wc.now_seconds();
            if (t >= 60.0 && t < 660.0) ++steady;
        }
        aggregate_per_min += static_cast<double>(steady) * 60.0 / 600.0;
    }
    const bool aggregate_ok =
        aggregate_per_min <= 10000.0 + 1e-6 && aggregate_per_min >= 9000.0;

    const double elapsed = seconds_since(t0);
    Check c;
    c.pass = window_ok && aggregate_ok && elapsed < 10.0;
    c.detail = strf(
        "600 RPM worker: max %zu grants in any sliding 60 s window (limit 601) "
        "over 10 min; 8 workers sharing 10000 RPM: %.1f grants/min steady state "
        "in [9000, 10000]; %.2fs (limit 10s)",
        max_in_window, aggregate_per_min, elapsed);
    return c;
}

// 5. Simulated throughput at W in {1, 2, 4, 8} with 50 ms latency scales
// within 15% of W x single-worker when uncapped; with an RPM cap below
// 8-worker capacity it plateaus within 10% of the cap.
Check check_scaling(Scratch&) {
    const double single =
        simulate_throughput(1, 0.05, std::nullopt, std::nullopt, 400);

    bool linear_ok = true;
    std::string per_w = strf("W=1 %.0f", single);
    for (int w : {2, 4, 8}) {
        const double tp =
            simulate_throughput(w, 0.05, std::nullopt, std::nullopt, 400 * w);
        per_w += strf(", W=%d %.0f", w, tp);
        if (std::fabs(tp - w * single) > 0.15 * w * single) linear_ok = false;
    }

    const double cap = 6000.0;  // 8 workers at 50 ms could reach 9600/min
    const double capped = simulate_throughput(8, 0.05, cap, std::nullopt, 4000);
    const bool cap_ok = std::fabs(capped - cap) <= 0.10 * cap;

    Check c;
    c.pass = linear_ok && cap_ok;
    c.detail = strf(
        "%s examples/min, each within 15%% of W x single; capped at 6000 RPM: "
        "%.0f/min within 10%% of the cap",
        per_w.c_str(), capped);
    return c;
}

// 6. The five lexical metrics reproduce the oracle values on the 50-pair
// fixture corpus within 1e-6.
Check check_lexical_oracle(Scratch&) {
    const auto fixture = load_fixture("lexical_oracle.json");
    double max_dev = 0.0;
    int pairs = 0;
    for (const auto& p : fixture.at("pairs")) {
        NormalizationOptions opts;
        opts.lowercase = p.at("options").at("lowercase").get<bool>();
        opts.strip_punctuation = p.at("options").at("strip_punctuation").get<bool>();
        opts.collapse_whitespace = p.at("options").at("collapse_whitespace").get<bool>();
        opts.strip_articles = p.at("options").at("strip_articles").get<bool>();
        const std::string pred = p.at("pred").get<std::string>();
        const std::string ref = p.at("ref").get<std::string>();

        const auto dev = [&](double got, const char* key) {
            max_dev = std::max(max_dev, std::fabs(got - p.at(key).get<double>()));
        };
        dev(exact_match(pred, ref, opts), "exact_match");
        dev(contains_match(pred, ref, opts), "contains");
        dev(token_f1(pred, ref, opts), "token_f1");
        dev(rouge_l(pred, ref, opts), "rouge_l");
        dev(bleu(pred, {ref}, 4, 1e-9, opts), "bleu");
        ++pairs;
    }

    Check c;
    c.pass = pairs == 50 && max_dev <= 1e-6;
    c.detail = strf(
        "exact_match/contains/token_f1/rouge_l/bleu over %d pairs: max deviation "
        "%.2e (tolerance 1e-6)",
        pairs, max_dev);
    return c;
}

// 7. Intervals and paired tests reproduce the oracle fixtures within
// 1e-6; the Wilcoxon exact branch matches full 2^n enumeration (n <= 12)
// and the permutation test matches exhaustive enumeration (n <= 10).
Check check_stats_oracle(Scratch&) {
    const auto fixture = load_fixture("stats_oracle.json");
    double max_dev = 0.0;
    bool branches_ok = true;
    const auto dev = [&](double got, double want) {
        max_dev = std::max(max_dev, std::fabs(got - want));
    };
    const auto vec = [](const nlohmann::json& j) {
        return j.get<std::vector<double>>();
    };

    for (const auto& w : fixture.at("wilson")) {
        const Interval iv = wilson_interval(w.at("successes").get<std::int64_t>(),
                                            w.at("n").get<std::int64_t>(),
                                            w.at("level").get<double>());
        dev(iv.lower, w.at("lower").get<double>());
        dev(iv.upper, w.at("upper").get<double>());
    }

    for (const auto& t : fixture.at("t_interval")) {
        const Interval iv = t_interval(vec(t.at("samples")), t.at("level").get<double>());
        dev(iv.lower, t.at("lower").get<double>());
        dev(iv.upper, t.at("upper").get<double>());
    }

    for (const auto& t : fixture.at("paired_t")) {
        const TestResult res = paired_t_test(vec(t.at("a")), vec(t.at("b")));
        dev(res.statistic, t.at("statistic").get<double>());
        dev(res.p_value, t.at("p_value").get<double>());
    }

    for (const auto& m : fixture.at("mcnemar")) {
        const auto [sa, sb] =
            discordant_pairs(m.at("b").get<int>(), m.at("c").get<int>());
        const TestResult res = mcnemar_test(sa, sb);
        const bool want_exact = m.at("branch").get<std::string>() == "exact";
        if ((res.test == TestKind::mcnemar_exact) != want_exact) branches_ok = false;
        dev(res.statistic, m.at("statistic").get<double>());
        dev(res.p_value, m.at("p_value").get<double>());
    }

    for (const auto& w : fixture.at("wilcoxon")) {
        const auto a = vec(w.at("a"));
        const auto b = vec(w.at("b"));
        const TestResult res = wilcoxon_signed_rank(a, b);
        dev(res.statistic, w.at("statistic").get<double>());
        dev(res.p_value, w.at("p_value").get<double>());
        if (w.at("branch").get<std::string>() == "exact") {
            std::vector<double> diffs(a.size());
            for (std::size_t i = 0; i < a.size(); ++i) diffs[i] = a[i] - b[i];
            dev(res.p_value, brute_force_wilcoxon_p(diffs));
        }
    }

    for (const auto& p : fixture.at("permutation_exact")) {
        const auto a = vec(p.at("a"));
        const auto b = vec(p.at("b"));
        const TestResult res = permutation_test(a, b, 10000, 1);
        dev(res.p_value, p.at("p_value").get<double>());
        dev(res.p_value, brute_force_permutation_p(a, b));
    }

    Check c;
    c.pass = max_dev <= 1e-6 && branches_ok;
    c.detail = strf(
        "wilson/t-interval/paired-t/mcnemar(exact+chi2)/wilcoxon(vs 2^n "
        "enumeration)/permutation(vs exhaustive): max deviation %.2e (tolerance "
        "1e-6), branch selection %s",
        max_dev, branches_ok ? "correct" : "WRONG");
    return c;
}

// 8. 10000 simulated examples at 400 input / 150 output tokens cost
// exactly $32.50 at $2.50/$15.00 per 1M tokens, and $1.50 at
// $0.15/$0.60.
Check check_cost_model(Scratch&) {
    ModelConfig flagship;
    flagship.price_per_1m_input = 2.50;
    flagship.price_per_1m_output = 15.00;
    ModelConfig small;
    small.price_per_1m_input = 0.15;
    small.price_per_1m_output = 0.60;

    std::int64_t input_tokens = 0, output_tokens = 0;
    double accumulated = 0.0;
    for (int i = 0; i < 10000; ++i) {
        input_tokens += 400;
        output_tokens += 150;
        accumulated += compute_cost(400, 150, flagship).value();
    }

    const double flagship_cost =
        compute_cost(input_tokens, output_tokens, flagship).value();
    const double small_cost = compute_cost(input_tokens, output_tokens, small).value();

    Check c;
    const bool exact_ok = flagship_cost == 32.50;
    const bool sum_ok = std::fabs(accumulated - 32.50) <= 1e-9;
    const bool small_ok = std::fabs(small_cost - 1.50) <= 1e-9;
    c.pass = exact_ok && sum_ok && small_ok;
    c.detail = strf(
        "10000 x (400 in, 150 out) at $2.50/$15.00 per 1M: $%.10g (exactly "
        "32.50: %s; per-example sum off by %.1e); at $0.15/$0.60: $%.10g",
        flagship_cost, exact_ok ? "yes" : "NO", std::fabs(accumulated - 32.50),
        small_cost);
    return c;
}

// 9. Two runs with identical task, seed, and worker count against the
// mock provider produce byte-identical canonical results.
Check check_determinism(Scratch&) {
    std::vector<Example> examples;
    for (int i = 0; i < 60; ++i) {
        Example e;
        e.example_id = "ex-" + std::to_string(i);
        e.rendered_prompt = i % 4 == 3
                                ? "echo:noise-" + std::to_string(i)
                                : strf("echo:judge:%d ans-%d", 1 + i % 5, i);
        e.reference = "ans-" + std::to_string(i);
        examples.push_back(std::move(e));
    }
    auto task = mock_task({"exact_match", "token_f1", "judge_pointwise"}, 4,
                          CachePolicy::disabled, "unused");
    task.statistics.rng_seed = 123;

    std::string dumps[2];
    for (auto& dump : dumps) {
        RunEnv env;
        const EvalResult result = evaluate(task, examples, &env);
        dump = result_to_json(result, true).dump();
    }

    Check c;
    c.pass = !dumps[0].empty() && dumps[0] == dumps[1];
    c.detail = strf(
        "two runs (seed 123, 4 workers, 60 examples, 3 metrics): canonical JSON "
        "%zu bytes, byte-identical: %s",
        dumps[0].size(), c.pass ? "yes" : "NO");
    return c;
}

// 10. A mock run with exact_match + embedding_similarity +
// judge_pointwise emits a MetricValue per metric with value, CI bounds,
// and n, and reports the unparseable-judge count.
Check check_end_to_end(Scratch&) {
    std::vector<Example> examples;
    for (int i = 0; i < 30; ++i) {
        Example e;
        e.example_id = "ex-" + std::to_string(i);
        e.rendered_prompt = i < 20 ? strf("echo:judge:%d ans-%d", 1 + i % 5, i)
                                   : "echo:plain-" + std::to_string(i);
        e.reference = i < 20 ? "ans-" + std::to_string(i)
                             : "plain-" + std::to_string(i);
        examples.push_back(std::move(e));
    }
    const auto task =
        mock_task({"exact_match", "embedding_similarity", "judge_pointwise"}, 3,
                  CachePolicy::disabled, "unused");
    RunEnv env;
    const EvalResult result = evaluate(task, examples, &env);

    bool metrics_ok = true;
    const nlohmann::json j = result_to_json(result, false);
    for (const auto* name : {"exact_match", "embedding_similarity", "judge_pointwise"}) {
        const auto it = result.per_metric.find(name);
        if (it == result.per_metric.end()) {
            metrics_ok = false;
            continue;
        }
        const MetricValue& mv = it->second;
        if (mv.n <= 0 || !(mv.ci_lower <= mv.value && mv.value <= mv.ci_upper))
            metrics_ok = false;
        const auto& jm = j.at("metrics").at(name);
        if (jm.at("value").is_null() || jm.at("ci_lower").is_null() ||
            jm.at("ci_upper").is_null() || !jm.at("n").is_number())
            metrics_ok = false;
    }
    const std::int64_t judge_excluded = result.per_metric.at("judge_pointwise").excluded;
    const bool unparseable_ok =
        judge_excluded == 10 && result.excluded_unparseable == 10 &&
        j.at("totals").at("excluded_unparseable").get<std::int64_t>() == 10;

    Check c;
    c.pass = metrics_ok && unparseable_ok;
    c.detail = strf(
        "3 metric families over 30 examples: every MetricValue carries value, CI "
        "bounds, n (judge n=%lld); unparseable judge outputs reported: %lld of 10",
        static_cast<long long>(result.per_metric.at("judge_pointwise").n),
        static_cast<long long>(judge_excluded));
    return c;
}

}  // namespace

int main() {
    const std::pair<const char*, Check (*)(Scratch&)> checks[] = {
        {"bootstrap interval coverage on log-normal data", check_coverage},
        {"type-I error of the paired tests under the null", check_type1},
        {"cache replay economics", check_replay_economics},
        {"rate-limit conformance under a simulated clock", check_rate_limit},
        {"worker scaling and throughput cap", check_scaling},
        {"lexical metrics match the oracle corpus", check_lexical_oracle},
        {"statistical routines match the oracles", check_stats_oracle},
        {"token cost model", check_cost_model},
        {"deterministic results for identical runs", check_determinism},
        {"end-to-end multi-family evaluation report", check_end_to_end},
    };

    Scratch scratch;
    int failed = 0;
    int index = 0;
    for (const auto& [name, fn] : checks) {
        ++index;
        Check c;
        try {
            c = fn(scratch);
        } catch (const std::exception& e) {
            c.pass = false;
            c.detail = strf("threw %s", e.what());
        }
        if (!c.pass) ++failed;
        std::printf("[%s] %2d. %s: %s\n", c.pass ? "PASS" : "FAIL", index, name,
                    c.detail.c_str());
    }
    std::printf("%d/10 acceptance checks passed\n", 10 - failed);
    return failed == 0 ? 0 : 1;
}
