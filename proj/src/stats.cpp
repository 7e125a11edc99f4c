#include "evalforge/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "evalforge/special_functions.hpp"

namespace evalforge {

namespace {

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / (static_cast<double>(v.size()) - 1.0));
}

void require_pair(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("paired score vectors differ in length");
    if (a.empty()) throw std::invalid_argument("empty score vectors");
}

}  // namespace

std::string to_string(CiKind k) {
    switch (k) {
        case CiKind::percentile: return "percentile";
        case CiKind::bca: return "bca";
        case CiKind::analytical_t: return "analytical_t";
        case CiKind::wilson: return "wilson";
    }
    return "?";
}

std::string to_string(TestKind k) {
    switch (k) {
        case TestKind::paired_t: return "paired_t";
        case TestKind::mcnemar_exact: return "mcnemar_exact";
        case TestKind::mcnemar_chi2: return "mcnemar_chi2";
        case TestKind::wilcoxon: return "wilcoxon";
        case TestKind::permutation: return "permutation";
    }
    return "?";
}

std::string to_string(SelectedTest t) {
    switch (t) {
        case SelectedTest::mcnemar: return "mcnemar";
        case SelectedTest::paired_t: return "paired_t";
        case SelectedTest::wilcoxon: return "wilcoxon";
        case SelectedTest::permutation: return "permutation";
    }
    return "?";
}

double linear_quantile(const std::vector<double>& sorted_values, double q) {
    if (sorted_values.empty()) throw std::invalid_argument("empty sample");
    if (q <= 0.0) return sorted_values.front();
    if (q >= 1.0) return sorted_values.back();
    const double h = (static_cast<double>(sorted_values.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(h);
    const double frac = h - static_cast<double>(lo);
    if (lo + 1 >= sorted_values.size()) return sorted_values.back();
    return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

std::vector<double> bootstrap_resample_means(const std::vector<double>& samples,
                                             int iterations, Rng& rng) {
    const std::size_t n = samples.size();
    std::vector<double> means(static_cast<std::size_t>(iterations));
    for (auto& m : means) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            sum += samples[rng.uniform_int(static_cast<std::uint64_t>(n))];
        m = sum / static_cast<double>(n);
    }
    return means;
}

Interval percentile_bootstrap_ci(const std::vector<double>& samples, double level,
                                 int iterations, std::uint64_t seed) {
    if (samples.size() < 2)
        throw std::invalid_argument("bootstrap requires n >= 2");
    if (iterations < 100)
        throw std::invalid_argument("bootstrap requires >= 100 iterations");
    Rng rng(seed);
    auto means = bootstrap_resample_means(samples, iterations, rng);
    std::sort(means.begin(), means.end());
    const double tail = (1.0 - level) / 2.0;
    return {linear_quantile(means, tail), linear_quantile(means, 1.0 - tail)};
}

BcaResult bca_bootstrap_ci(const std::vector<double>& samples, double level,
                           int iterations, std::uint64_t seed) {
    if (samples.size() < 3) throw std::invalid_argument("BCa requires n >= 3");
    if (iterations < 100)
        throw std::invalid_argument("bootstrap requires >= 100 iterations");

    Rng rng(seed);
    auto means = bootstrap_resample_means(samples, iterations, rng);
    std::sort(means.begin(), means.end());
    const double theta_hat = mean_of(samples);
    const double tail = (1.0 - level) / 2.0;

    BcaResult result;

    // Bias correction: proportion of the bootstrap distribution below the
    // observed statistic, ties counted as half, clamped so that ppf stays
    // finite on discrete data.
    const double b_count = static_cast<double>(
        std::lower_bound(means.begin(), means.end(), theta_hat) - means.begin());
    const double tie_count = static_cast<double>(
        std::upper_bound(means.begin(), means.end(), theta_hat) - means.begin() -
        static_cast<std::ptrdiff_t>(b_count));
    double proportion = (b_count + 0.5 * tie_count) / static_cast<double>(iterations);
    const double clamp = 0.5 / static_cast<double>(iterations);
    proportion = std::clamp(proportion, clamp, 1.0 - clamp);
    const double z0 = normal_ppf(proportion);

    // Acceleration from the jackknife distribution of the mean.
    const std::size_t n = samples.size();
    const double total = std::accumulate(samples.begin(), samples.end(), 0.0);
    std::vector<double> jack(n);
    for (std::size_t i = 0; i < n; ++i)
        jack[i] = (total - samples[i]) / static_cast<double>(n - 1);
    const double jack_mean = mean_of(jack);
    double sum_sq = 0.0, sum_cu = 0.0;
    for (double j : jack) {
        const double d = jack_mean - j;
        sum_sq += d * d;
        sum_cu += d * d * d;
    }

    double alpha1, alpha2;
    if (sum_sq == 0.0) {
        result.params.fallback_percentile = true;
        alpha1 = tail;
        alpha2 = 1.0 - tail;
        result.params.z0 = 0.0;
        result.params.a = 0.0;
    } else {
        const double a = sum_cu / (6.0 * std::pow(sum_sq, 1.5));
        const double z_lo = normal_ppf(tail);
        const double z_hi = normal_ppf(1.0 - tail);
        alpha1 = normal_cdf(z0 + (z0 + z_lo) / (1.0 - a * (z0 + z_lo)));
        alpha2 = normal_cdf(z0 + (z0 + z_hi) / (1.0 - a * (z0 + z_hi)));
        result.params.z0 = z0;
        result.params.a = a;
    }
    result.params.alpha1 = alpha1;
    result.params.alpha2 = alpha2;
    result.interval = {linear_quantile(means, alpha1), linear_quantile(means, alpha2)};
    return result;
}

Interval t_interval(const std::vector<double>& samples, double level) {
    const std::size_t n = samples.size();
    if (n < 2) throw std::invalid_argument("t interval requires n >= 2");
    const double m = mean_of(samples);
    const double sd = sample_sd(samples);
    if (sd == 0.0) return {m, m};
    const double crit = student_t_ppf(1.0 - (1.0 - level) / 2.0,
                                      static_cast<double>(n - 1));
    const double half = crit * sd / std::sqrt(static_cast<double>(n));
    return {m - half, m + half};
}

Interval wilson_interval(std::int64_t successes, std::int64_t n, double level) {
    if (n < 1) throw std::invalid_argument("Wilson interval requires n >= 1");
    if (successes < 0 || successes > n)
        throw std::invalid_argument("successes out of range");
    const double z = normal_ppf(1.0 - (1.0 - level) / 2.0);
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half =
        z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    Interval ci{center - half, center + half};
    if (successes == 0) ci.lower = 0.0;
    if (successes == n) ci.upper = 1.0;
    return ci;
}

TestResult paired_t_test(const std::vector<double>& scores_a,
                         const std::vector<double>& scores_b, double alpha) {
    require_pair(scores_a, scores_b);
    const std::size_t n = scores_a.size();
    if (n < 2) throw std::invalid_argument("paired t requires n >= 2");

    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = scores_a[i] - scores_b[i];
    const double d_mean = mean_of(d);
    const double d_sd = sample_sd(d);

    TestResult result;
    result.test = TestKind::paired_t;
    result.n_effective = static_cast<std::int64_t>(n);
    if (d_sd == 0.0) {
        result.degenerate = true;
        if (d_mean == 0.0) {
            result.statistic = 0.0;
            result.p_value = 1.0;
        } else {
            result.statistic = d_mean > 0 ? std::numeric_limits<double>::infinity()
                                          : -std::numeric_limits<double>::infinity();
            result.p_value = 0.0;
        }
    } else {
        result.statistic = d_mean / (d_sd / std::sqrt(static_cast<double>(n)));
        result.p_value =
            student_t_two_sided(result.statistic, static_cast<double>(n - 1));
    }
    result.significant = result.p_value < alpha;
    return result;
}

double mcnemar_exact_p(std::int64_t b, std::int64_t c) {
    const std::int64_t n = b + c;
    if (n == 0) return 1.0;
    const std::int64_t k_max = std::min(b, c);
    // Cumulative binomial(n, 1/2) tail via log binomial coefficients.
    double tail = 0.0;
    for (std::int64_t k = 0; k <= k_max; ++k) {
        const double log_term =
            std::lgamma(static_cast<double>(n) + 1.0) -
            std::lgamma(static_cast<double>(k) + 1.0) -
            std::lgamma(static_cast<double>(n - k) + 1.0) -
            static_cast<double>(n) * std::log(2.0);
        tail += std::exp(log_term);
    }
    return std::min(1.0, 2.0 * tail);
}

TestResult mcnemar_test(const std::vector<double>& binary_a,
                        const std::vector<double>& binary_b, double alpha) {
    require_pair(binary_a, binary_b);
    std::int64_t b = 0, c = 0;
    for (std::size_t i = 0; i < binary_a.size(); ++i) {
        const bool a1 = binary_a[i] != 0.0;
        const bool b1 = binary_b[i] != 0.0;
        if (a1 && !b1) ++b;
        if (!a1 && b1) ++c;
    }

    TestResult result;
    result.n_effective = b + c;
    if (b + c == 0) {
        result.test = TestKind::mcnemar_exact;
        result.statistic = 0.0;
        result.p_value = 1.0;
        result.degenerate = true;
    } else if (b + c < 10) {
        result.test = TestKind::mcnemar_exact;
        result.statistic = static_cast<double>(std::min(b, c));
        result.p_value = mcnemar_exact_p(b, c);
    } else {
        result.test = TestKind::mcnemar_chi2;
        const double diff = std::fabs(static_cast<double>(b - c)) - 1.0;
        const double chi2 = diff * diff / static_cast<double>(b + c);
        result.statistic = chi2;
        result.p_value = chi_squared_sf(chi2, 1.0);
    }
    result.significant = result.p_value < alpha;
    return result;
}

namespace {

/// Average ranks of |d| with ties shared.
std::vector<double> average_ranks(const std::vector<double>& abs_d) {
    const std::size_t n = abs_d.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return abs_d[i] < abs_d[j]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && abs_d[order[j + 1]] == abs_d[order[i]]) ++j;
        const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

/// Exact two-sided p: probability that min(W+, W-) is at most w_obs over
/// the 2^n equally likely sign assignments.
double wilcoxon_exact_p(const std::vector<double>& ranks, double w_obs) {
    const std::size_t n = ranks.size();
    const double total = std::accumulate(ranks.begin(), ranks.end(), 0.0);
    const std::uint64_t combos = 1ULL << n;
    std::uint64_t hits = 0;
    for (std::uint64_t mask = 0; mask < combos; ++mask) {
        double w_plus = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1ULL << i)) w_plus += ranks[i];
        const double w = std::min(w_plus, total - w_plus);
        if (w <= w_obs + 1e-12) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(combos);
}

}  // namespace

TestResult wilcoxon_signed_rank(const std::vector<double>& scores_a,
                                const std::vector<double>& scores_b, double alpha) {
    require_pair(scores_a, scores_b);

    std::vector<double> abs_d;
    std::vector<int> sign;
    for (std::size_t i = 0; i < scores_a.size(); ++i) {
        const double d = scores_a[i] - scores_b[i];
        if (d == 0.0) continue;
        abs_d.push_back(std::fabs(d));
        sign.push_back(d > 0 ? 1 : -1);
    }

    TestResult result;
    result.test = TestKind::wilcoxon;
    const std::size_t n = abs_d.size();
    result.n_effective = static_cast<std::int64_t>(n);
    if (n == 0) {
        result.statistic = 0.0;
        result.p_value = 1.0;
        result.degenerate = true;
        result.significant = false;
        return result;
    }

    const auto ranks = average_ranks(abs_d);
    double w_plus = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (sign[i] > 0) w_plus += ranks[i];
    const double total = static_cast<double>(n) * (static_cast<double>(n) + 1.0) / 2.0;
    const double w = std::min(w_plus, total - w_plus);
    result.statistic = w;

    if (n < 15) {
        result.p_value = wilcoxon_exact_p(ranks, w);
    } else {
        const double nn = static_cast<double>(n);
        const double mean = nn * (nn + 1.0) / 4.0;
        double tie_term = 0.0;
        std::size_t i = 0;
        std::vector<double> sorted_abs = abs_d;
        std::sort(sorted_abs.begin(), sorted_abs.end());
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && sorted_abs[j + 1] == sorted_abs[i]) ++j;
            const double t = static_cast<double>(j - i + 1);
            tie_term += t * t * t - t;
            i = j + 1;
        }
        const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
        if (var <= 0.0) {
            result.p_value = 1.0;
            result.degenerate = true;
        } else {
            const double z = (w - mean + 0.5) / std::sqrt(var);
            result.p_value = std::min(1.0, 2.0 * normal_cdf(z));
        }
    }
    result.significant = result.p_value < alpha;
    return result;
}

TestResult permutation_test(const std::vector<double>& scores_a,
                            const std::vector<double>& scores_b, int iterations,
                            std::uint64_t seed, double alpha) {
    require_pair(scores_a, scores_b);
    if (iterations < 100)
        throw std::invalid_argument("permutation test requires >= 100 iterations");

    const std::size_t n = scores_a.size();
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = scores_a[i] - scores_b[i];
    const double observed = mean_of(d);

    TestResult result;
    result.test = TestKind::permutation;
    result.statistic = observed;
    result.n_effective = static_cast<std::int64_t>(n);

    if (n <= 10) {
        // The full sign-flip distribution has at most 1024 points; use it
        // exactly instead of sampling (no smoothing term needed).
        const std::uint64_t combos = 1ULL << n;
        std::uint64_t at_least = 0;
        for (std::uint64_t mask = 0; mask < combos; ++mask) {
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                sum += (mask & (1ULL << i)) ? -d[i] : d[i];
            const double delta = sum / static_cast<double>(n);
            if (std::fabs(delta) >= std::fabs(observed) - 1e-15) ++at_least;
        }
        result.p_value =
            static_cast<double>(at_least) / static_cast<double>(combos);
    } else {
        Rng rng(seed);
        std::int64_t at_least = 0;
        for (int it = 0; it < iterations; ++it) {
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                sum += rng.bernoulli(0.5) ? -d[i] : d[i];
            const double delta = sum / static_cast<double>(n);
            if (std::fabs(delta) >= std::fabs(observed) - 1e-15) ++at_least;
        }
        result.p_value = (1.0 + static_cast<double>(at_least)) /
                         (1.0 + static_cast<double>(iterations));
    }
    result.significant = result.p_value < alpha;
    return result;
}

SelectedTest select_test(bool metric_is_binary, std::int64_t n,
                         std::optional<bool> differences_normal) {
    if (metric_is_binary) return SelectedTest::mcnemar;
    if (!differences_normal.has_value()) return SelectedTest::permutation;
    if (*differences_normal && n > 30) return SelectedTest::paired_t;
    return SelectedTest::wilcoxon;
}

EffectSizes effect_sizes(const std::vector<double>& scores_a,
                         const std::vector<double>& scores_b, bool binary) {
    require_pair(scores_a, scores_b);
    const std::size_t n = scores_a.size();
    if (n < 2) throw std::invalid_argument("effect sizes require n >= 2");

    EffectSizes result;
    const double mean_a = mean_of(scores_a);
    const double mean_b = mean_of(scores_b);
    const double sd_a = sample_sd(scores_a);
    const double sd_b = sample_sd(scores_b);
    const double nn = static_cast<double>(n);
    const double pooled_var =
        ((nn - 1.0) * sd_a * sd_a + (nn - 1.0) * sd_b * sd_b) / (2.0 * nn - 2.0);
    if (pooled_var > 0.0) {
        const double d = (mean_a - mean_b) / std::sqrt(pooled_var);
        result.cohens_d = d;
        result.hedges_g = d * (1.0 - 3.0 / (4.0 * (2.0 * nn - 2.0) - 1.0));
    }

    if (binary) {
        double s1 = 0.0, s2 = 0.0;
        for (double x : scores_a) s1 += x != 0.0 ? 1.0 : 0.0;
        for (double x : scores_b) s2 += x != 0.0 ? 1.0 : 0.0;
        double f1 = nn - s1;
        double f2 = nn - s2;
        if (s1 == 0.0 || s2 == 0.0 || f1 == 0.0 || f2 == 0.0) {
            s1 += 0.5;
            s2 += 0.5;
            f1 += 0.5;
            f2 += 0.5;
        }
        result.odds_ratio = (s1 / f1) / (s2 / f2);
    }
    return result;
}

MetricValue aggregate_scores(const std::vector<double>& scores, bool binary,
                             const StatisticsConfig& cfg, std::int64_t excluded,
                             std::uint64_t seed) {
    MetricValue mv;
    mv.n = static_cast<std::int64_t>(scores.size());
    mv.excluded = excluded;
    if (scores.empty()) {
        mv.ci_method = cfg.ci_method == CiMethod::bca ? CiKind::bca : CiKind::percentile;
        return mv;
    }
    mv.value = mean_of(scores);

    if (scores.size() < 2) {
        mv.ci_lower = mv.value;
        mv.ci_upper = mv.value;
        mv.ci_method = CiKind::percentile;
        return mv;
    }

    switch (cfg.ci_method) {
        case CiMethod::percentile: {
            const auto ci = percentile_bootstrap_ci(scores, cfg.confidence_level,
                                                    cfg.bootstrap_iterations, seed);
            mv.ci_lower = ci.lower;
            mv.ci_upper = ci.upper;
            mv.ci_method = CiKind::percentile;
            break;
        }
        case CiMethod::bca: {
            if (scores.size() < 3) {
                const auto ci = percentile_bootstrap_ci(
                    scores, cfg.confidence_level, cfg.bootstrap_iterations, seed);
                mv.ci_lower = ci.lower;
                mv.ci_upper = ci.upper;
                mv.ci_method = CiKind::percentile;
                break;
            }
            const auto bca = bca_bootstrap_ci(scores, cfg.confidence_level,
                                              cfg.bootstrap_iterations, seed);
            mv.ci_lower = bca.interval.lower;
            mv.ci_upper = bca.interval.upper;
            mv.ci_method = bca.params.fallback_percentile ? CiKind::percentile
                                                          : CiKind::bca;
            break;
        }
        case CiMethod::analytical: {
            if (binary) {
                const auto successes = static_cast<std::int64_t>(
                    std::llround(mv.value * static_cast<double>(scores.size())));
                const auto ci =
                    wilson_interval(successes, mv.n, cfg.confidence_level);
                mv.ci_lower = ci.lower;
                mv.ci_upper = ci.upper;
                mv.ci_method = CiKind::wilson;
            } else {
                const auto ci = t_interval(scores, cfg.confidence_level);
                mv.ci_lower = ci.lower;
                mv.ci_upper = ci.upper;
                mv.ci_method = CiKind::analytical_t;
            }
            break;
        }
    }
    return mv;
}

}  // namespace evalforge
