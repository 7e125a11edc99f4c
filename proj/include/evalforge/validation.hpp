/// @file validation.hpp
/// Monte Carlo self-checks of the statistics layer: empirical CI
/// coverage on skewed (log-normal) data and Type-I error of the paired
/// tests under the null. Shared by `validate-stats` and the acceptance
/// suite.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace evalforge {

struct CoverageRow {
    int n = 0;
    int replicates = 0;
    double percentile_coverage = 0.0;
    double bca_coverage = 0.0;
};

struct CoverageReport {
    std::vector<CoverageRow> rows;  // n = 50 and n = 200
    double true_mean = 0.0;
    double level = 0.95;
    bool bca_band_ok = false;        // BCa at n=200 within [0.925, 0.975]
    bool ordering_ok = false;        // percentile < BCa at n=50
    bool pass = false;
};

/// Draws `replicates` log-normal(mu=0, sigma=0.5) datasets at each
/// n in {50, 200} and measures how often the percentile and BCa
/// intervals cover the true mean exp(0.125). Deterministic in seed.
CoverageReport coverage_experiment(int replicates, int bootstrap_iterations,
                                   std::uint64_t seed);

struct TypeIRow {
    std::string test;
    int n = 0;
    int replicates = 0;
    double rejection_rate = 0.0;
    bool in_band = false;  // within [0.035, 0.065]
};

struct TypeIReport {
    std::vector<TypeIRow> rows;  // paired_t, mcnemar, wilcoxon
    double alpha = 0.05;
    bool pass = false;
};

/// Runs `replicates` null paired comparisons per test (identical score
/// distributions for both models) and reports empirical rejection rates
/// at alpha = 0.05. Deterministic in seed.
TypeIReport type1_experiment(int replicates, std::uint64_t seed);

}  // namespace evalforge
