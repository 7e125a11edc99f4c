/// @file validation.cpp

#include "evalforge/validation.hpp"

#include <cmath>

#include "evalforge/rng.hpp"
#include "evalforge/stats.hpp"

namespace evalforge {

CoverageReport coverage_experiment(int replicates, int bootstrap_iterations,
                                   std::uint64_t seed) {
    CoverageReport report;
    report.true_mean = std::exp(0.125);  // E[lognormal(0, 0.5)] = exp(sigma^2/2)
    report.level = 0.95;

    const int sizes[] = {50, 200};
    int percentile_hits[2] = {0, 0};
    int bca_hits[2] = {0, 0};

    for (int rep = 0; rep < replicates; ++rep) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(rep));
        for (int si = 0; si < 2; ++si) {
            const int n = sizes[si];
            std::vector<double> samples(static_cast<std::size_t>(n));
            for (double& x : samples) x = rng.lognormal(0.0, 0.5);
            // Both intervals read the same bootstrap distribution, so the
            // comparison isolates the endpoint rule.
            const std::uint64_t bseed = rng.next_u64();
            const Interval pct = percentile_bootstrap_ci(
                samples, report.level, bootstrap_iterations, bseed);
            const BcaResult bca = bca_bootstrap_ci(
                samples, report.level, bootstrap_iterations, bseed);
            if (pct.lower <= report.true_mean && report.true_mean <= pct.upper)
                percentile_hits[si] += 1;
            if (bca.interval.lower <= report.true_mean &&
                report.true_mean <= bca.interval.upper)
                bca_hits[si] += 1;
        }
    }

    for (int si = 0; si < 2; ++si) {
        CoverageRow row;
        row.n = sizes[si];
        row.replicates = replicates;
        row.percentile_coverage =
            static_cast<double>(percentile_hits[si]) / replicates;
        row.bca_coverage = static_cast<double>(bca_hits[si]) / replicates;
        report.rows.push_back(row);
    }

    report.bca_band_ok = report.rows[1].bca_coverage >= 0.925 &&
                         report.rows[1].bca_coverage <= 0.975;
    report.ordering_ok =
        report.rows[0].percentile_coverage < report.rows[0].bca_coverage;
    report.pass = report.bca_band_ok && report.ordering_ok;
    return report;
}

TypeIReport type1_experiment(int replicates, std::uint64_t seed) {
    TypeIReport report;
    report.alpha = 0.05;

    const int n_continuous = 200;
    const int n_binary = 1000;
    int rejections[3] = {0, 0, 0};

    for (int rep = 0; rep < replicates; ++rep) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(rep));

        std::vector<double> a(n_continuous);
        std::vector<double> b(n_continuous);
        for (int i = 0; i < n_continuous; ++i) {
            a[static_cast<std::size_t>(i)] = rng.normal();
            b[static_cast<std::size_t>(i)] = rng.normal();
        }
        if (paired_t_test(a, b, report.alpha).significant) rejections[0] += 1;
        if (wilcoxon_signed_rank(a, b, report.alpha).significant) rejections[2] += 1;

        std::vector<double> ba(n_binary);
        std::vector<double> bb(n_binary);
        for (int i = 0; i < n_binary; ++i) {
            ba[static_cast<std::size_t>(i)] = rng.bernoulli(0.5) ? 1.0 : 0.0;
            bb[static_cast<std::size_t>(i)] = rng.bernoulli(0.5) ? 1.0 : 0.0;
        }
        if (mcnemar_test(ba, bb, report.alpha).significant) rejections[1] += 1;
    }

    const char* names[] = {"paired_t", "mcnemar", "wilcoxon"};
    const int sizes[] = {n_continuous, n_binary, n_continuous};
    for (int t = 0; t < 3; ++t) {
        TypeIRow row;
        row.test = names[t];
        row.n = sizes[t];
        row.replicates = replicates;
        row.rejection_rate = static_cast<double>(rejections[t]) / replicates;
        row.in_band = row.rejection_rate >= 0.035 && row.rejection_rate <= 0.065;
        report.rows.push_back(row);
    }
    report.pass =
        report.rows[0].in_band && report.rows[1].in_band && report.rows[2].in_band;
    return report;
}

}  // namespace evalforge
