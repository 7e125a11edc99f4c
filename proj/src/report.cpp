/// @file report.cpp

#include "evalforge/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

namespace evalforge {
namespace {

std::string fixed(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

std::string format_statistic(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return fixed(x, 4);
}

}  // namespace

std::string effect_qualifier(double d) {
    const double a = std::fabs(d);
    if (a < 0.2) return "negligible";
    if (a < 0.5) return "small";
    if (a < 0.8) return "medium";
    return "large";
}

std::string render_report(const EvalResult& result, double confidence_level) {
    std::ostringstream out;
    out << "Task: " << result.task_id << "\n";
    out << "Examples: " << result.total_examples << " total, "
        << result.failed_examples << " failed, " << result.excluded_unparseable
        << " excluded (unparseable)\n";
    out << "Total cost: $" << fixed(result.total_cost, 4) << "\n\n";

    const std::string ci_header =
        fixed(confidence_level * 100.0, 0) + "% CI";
    out << pad("Metric", 24) << pad("Value", 10) << pad(ci_header, 22)
        << pad("n", 7) << pad("Method", 14) << "Excluded\n";
    for (const auto& [name, mv] : result.per_metric) {
        out << pad(name, 24);
        if (mv.n > 0) {
            out << pad(fixed(mv.value, 4), 10)
                << pad("[" + fixed(mv.ci_lower, 4) + ", " +
                           fixed(mv.ci_upper, 4) + "]",
                       22);
        } else {
            out << pad("-", 10) << pad("-", 22);
        }
        out << pad(std::to_string(mv.n), 7) << pad(to_string(mv.ci_method), 14)
            << mv.excluded << "\n";
    }

    const CacheStats& c = result.cache_stats;
    out << "\nCache: " << c.lookups << " lookups, " << c.hits << " hits, "
        << c.misses << " misses, " << c.writes << " writes, " << c.expired_skips
        << " expired\n";

    if (!result.failures.empty()) {
        out << "Failures:\n";
        for (const auto& f : result.failures) {
            out << "  " << f.example_id << ": " << to_string(f.record.kind);
            if (f.record.http_status) out << " (HTTP " << *f.record.http_status << ")";
            out << " after " << f.record.attempts << " attempt"
                << (f.record.attempts == 1 ? "" : "s");
            if (!f.record.message.empty()) out << ": " << f.record.message;
            out << "\n";
        }
    }
    return out.str();
}

std::string render_comparison(const ComparisonResult& result, double alpha) {
    std::ostringstream out;
    out << "Comparing " << (result.model_a.empty() ? "run A" : result.model_a)
        << " vs " << (result.model_b.empty() ? "run B" : result.model_b)
        << " on " << result.metric_name << " (paired n=" << result.paired_n
        << ")\n";

    auto line = [&](const char* label, const MetricValue& mv) {
        out << "  " << label << ": ";
        if (mv.n > 0) {
            out << fixed(mv.value, 4) << " [" << fixed(mv.ci_lower, 4) << ", "
                << fixed(mv.ci_upper, 4) << "] (n=" << mv.n << ")";
        } else {
            out << "-";
        }
        out << "\n";
    };
    line("A", result.value_a);
    line("B", result.value_b);

    out << "  Test: " << to_string(result.test.test)
        << " (selected: " << to_string(result.recommended_test) << ")\n";
    out << "  statistic=" << format_statistic(result.test.statistic)
        << ", p=" << fixed(result.test.p_value, 6)
        << ", n_effective=" << result.test.n_effective;
    if (result.test.degenerate) out << " [degenerate]";
    out << "\n";
    if (result.fallback_permutation) {
        out << "  Fallback permutation: p="
            << fixed(result.fallback_permutation->p_value, 6) << "\n";
    }
    out << "  Verdict: "
        << (result.test.significant ? "significant difference"
                                    : "no significant difference")
        << " at alpha=" << fixed(alpha, 2) << "\n";

    out << "  Effect sizes:";
    bool any = false;
    if (result.effects.cohens_d) {
        out << " Cohen's d=" << fixed(*result.effects.cohens_d, 4) << " ("
            << effect_qualifier(*result.effects.cohens_d) << ")";
        any = true;
    }
    if (result.effects.hedges_g) {
        out << (any ? "," : "") << " Hedges' g="
            << fixed(*result.effects.hedges_g, 4);
        any = true;
    }
    if (result.effects.odds_ratio) {
        out << (any ? "," : "") << " odds ratio="
            << fixed(*result.effects.odds_ratio, 4);
        any = true;
    }
    if (!any) out << " none (zero variance)";
    out << "\n";
    return out.str();
}

std::string render_cache_report(const CacheStats& stats, std::size_t live_entries,
                                std::int64_t physical_records,
                                std::uint64_t total_bytes) {
    std::ostringstream out;
    out << "Entries: " << live_entries << " live, " << physical_records
        << " physical records, " << total_bytes << " bytes\n";
    out << "Lookups: " << stats.lookups << ", hits: " << stats.hits
        << ", misses: " << stats.misses << ", writes: " << stats.writes
        << ", expired skips: " << stats.expired_skips << "\n";
    if (stats.lookups > 0) {
        out << "Hit rate: "
            << fixed(100.0 * static_cast<double>(stats.hits) /
                         static_cast<double>(stats.lookups),
                     1)
            << "%\n";
    }
    return out.str();
}

std::string render_validation(const CoverageReport& coverage,
                              const TypeIReport& type1) {
    std::ostringstream out;
    out << "Empirical coverage of " << fixed(coverage.level * 100.0, 0)
        << "% confidence intervals (log-normal data, true mean "
        << fixed(coverage.true_mean, 6) << ")\n";
    out << pad("n", 8) << pad("Replicates", 12) << pad("Percentile", 12)
        << "BCa\n";
    for (const auto& row : coverage.rows) {
        out << pad(std::to_string(row.n), 8)
            << pad(std::to_string(row.replicates), 12)
            << pad(fixed(row.percentile_coverage * 100.0, 1) + "%", 12)
            << fixed(row.bca_coverage * 100.0, 1) << "%\n";
    }
    out << "BCa band [92.5%, 97.5%] at n=200: "
        << (coverage.bca_band_ok ? "ok" : "VIOLATED") << "\n";
    out << "Percentile < BCa at n=50: " << (coverage.ordering_ok ? "ok" : "VIOLATED")
        << "\n\n";

    out << "Type-I error at alpha=" << fixed(type1.alpha, 2)
        << " (null paired comparisons)\n";
    out << pad("Test", 12) << pad("n", 8) << pad("Replicates", 12)
        << pad("Rejection", 12) << "Band [3.5%, 6.5%]\n";
    for (const auto& row : type1.rows) {
        out << pad(row.test, 12) << pad(std::to_string(row.n), 8)
            << pad(std::to_string(row.replicates), 12)
            << pad(fixed(row.rejection_rate * 100.0, 2) + "%", 12)
            << (row.in_band ? "ok" : "VIOLATED") << "\n";
    }
    out << "\nOverall: "
        << (coverage.pass && type1.pass ? "all bands satisfied"
                                        : "BAND VIOLATION")
        << "\n";
    return out.str();
}

}  // namespace evalforge
