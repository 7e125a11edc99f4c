/// @file report.hpp
/// Human-readable rendering of run results, comparisons, cache stats,
/// and validation tables. Every number printed here also appears in the
/// corresponding machine-readable JSON document.

#pragma once

#include <string>

#include "evalforge/cache.hpp"
#include "evalforge/runner.hpp"
#include "evalforge/validation.hpp"

namespace evalforge {

/// Conventional |d| thresholds: < 0.2 negligible, then small, medium,
/// large at 0.2 / 0.5 / 0.8.
std::string effect_qualifier(double d);

std::string render_report(const EvalResult& result, double confidence_level);

std::string render_comparison(const ComparisonResult& result, double alpha);

std::string render_cache_report(const CacheStats& stats, std::size_t live_entries,
                                std::int64_t physical_records,
                                std::uint64_t total_bytes);

std::string render_validation(const CoverageReport& coverage,
                              const TypeIReport& type1);

}  // namespace evalforge
