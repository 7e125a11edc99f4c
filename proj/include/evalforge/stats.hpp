/// @file stats.hpp
/// Confidence intervals (percentile/BCa bootstrap, Student-t, Wilson),
/// paired significance tests (t, McNemar, Wilcoxon signed-rank,
/// permutation), the test-selection heuristic, and effect sizes. All
/// randomized procedures are bit-reproducible given (seed, iterations).

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evalforge/config.hpp"
#include "evalforge/rng.hpp"

namespace evalforge {

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
};

enum class CiKind { percentile, bca, analytical_t, wilson };

std::string to_string(CiKind k);

struct MetricValue {
    double value = 0.0;
    double ci_lower = 0.0;
    double ci_upper = 0.0;
    std::int64_t n = 0;
    CiKind ci_method = CiKind::percentile;
    std::int64_t excluded = 0;
};

struct BcaParams {
    double z0 = 0.0;
    double a = 0.0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    bool fallback_percentile = false;
};

struct BcaResult {
    Interval interval;
    BcaParams params;
};

enum class TestKind { paired_t, mcnemar_exact, mcnemar_chi2, wilcoxon, permutation };

std::string to_string(TestKind k);

struct TestResult {
    TestKind test = TestKind::paired_t;
    double statistic = 0.0;
    double p_value = 1.0;
    std::int64_t n_effective = 0;
    bool significant = false;
    bool degenerate = false;
};

struct EffectSizes {
    std::optional<double> cohens_d;
    std::optional<double> hedges_g;
    std::optional<double> odds_ratio;
};

/// Linear-interpolation quantile between order statistics of sorted
/// values; q in [0, 1].
double linear_quantile(const std::vector<double>& sorted_values, double q);

/// B resample means of samples (size-n draws with replacement), in draw
/// order. Shared by the percentile and BCa intervals so both see the
/// same bootstrap distribution for a given seed.
std::vector<double> bootstrap_resample_means(const std::vector<double>& samples,
                                             int iterations, Rng& rng);

/// Equal-tailed interval over bootstrap means. Requires n >= 2 and
/// iterations >= 100.
Interval percentile_bootstrap_ci(const std::vector<double>& samples, double level,
                                 int iterations, std::uint64_t seed);

/// Bias-corrected and accelerated interval. z0 counts resamples below
/// the observed mean (ties as half, proportion clamped away from 0/1);
/// acceleration from the jackknife skewness. A degenerate jackknife
/// falls back to percentile levels, flagged in params. Requires n >= 3.
BcaResult bca_bootstrap_ci(const std::vector<double>& samples, double level,
                           int iterations, std::uint64_t seed);

/// mean +/- t_(1-(1-level)/2, n-1) * s / sqrt(n). Requires n >= 2.
Interval t_interval(const std::vector<double>& samples, double level);

/// Wilson score interval for a binomial proportion. Requires n >= 1.
Interval wilson_interval(std::int64_t successes, std::int64_t n, double level);

TestResult paired_t_test(const std::vector<double>& scores_a,
                         const std::vector<double>& scores_b,
                         double alpha = 0.05);

/// Exact two-sided binomial p for discordant counts (b, c):
/// min(1, 2 * P(X <= min(b,c)) with X ~ Binomial(b+c, 1/2)).
double mcnemar_exact_p(std::int64_t b, std::int64_t c);

/// Discordant-pair test over binary scores: exact binomial when
/// b + c < 10, else chi-squared with continuity correction
/// (|b-c|-1)^2/(b+c) on 1 df.
TestResult mcnemar_test(const std::vector<double>& binary_a,
                        const std::vector<double>& binary_b,
                        double alpha = 0.05);

TestResult wilcoxon_signed_rank(const std::vector<double>& scores_a,
                                const std::vector<double>& scores_b,
                                double alpha = 0.05);

/// Sign-flip permutation test on paired differences. For n <= 10 the
/// 2^n flip patterns are enumerated exactly; otherwise `iterations`
/// random patterns are sampled with add-one smoothing:
/// p = (1 + #{|d_perm| >= |d_obs|}) / (1 + iterations).
TestResult permutation_test(const std::vector<double>& scores_a,
                            const std::vector<double>& scores_b, int iterations,
                            std::uint64_t seed, double alpha = 0.05);

struct NormalityResult {
    double w = 0.0;
    double p_value = 0.0;
    bool is_normal = false;
    bool available = false;
};

/// Shapiro-Wilk (AS R94 approximation), defined for 3 <= n <= 5000.
NormalityResult normality_check(const std::vector<double>& samples);

enum class SelectedTest { mcnemar, paired_t, wilcoxon, permutation };

std::string to_string(SelectedTest t);

/// Binary -> McNemar; continuous normal with n > 30 -> paired t;
/// continuous non-normal (or normal with small n) -> Wilcoxon;
/// normality unknown -> permutation.
SelectedTest select_test(bool metric_is_binary, std::int64_t n,
                         std::optional<bool> differences_normal);

/// Cohen's d on the pooled standard deviation, Hedges' small-sample
/// correction g = d * (1 - 3/(8n-9)), and for binary metrics the odds
/// ratio with the Haldane-Anscombe +0.5 correction when any cell is
/// empty. d and g are absent when the pooled variance is zero.
EffectSizes effect_sizes(const std::vector<double>& scores_a,
                         const std::vector<double>& scores_b, bool binary);

/// Builds the reported MetricValue for one metric: mean of the included
/// scores plus the configured interval (analytical routes binary metrics
/// to Wilson, others to the t interval).
MetricValue aggregate_scores(const std::vector<double>& scores, bool binary,
                             const StatisticsConfig& cfg, std::int64_t excluded,
                             std::uint64_t seed);

}  // namespace evalforge
