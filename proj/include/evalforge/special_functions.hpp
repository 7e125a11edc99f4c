/// @file special_functions.hpp
/// Distribution functions backing the statistics module: standard normal
/// CDF/quantile, regularized incomplete beta/gamma, Student-t and
/// chi-squared tails. Accuracy targets: |error| < 1e-9 for the normal
/// pair, < 1e-10 for the continued-fraction functions over the ranges the
/// tests exercise.

#pragma once

namespace evalforge {

/// Standard normal CDF via erfc (no precision loss in the tails).
double normal_cdf(double x);

/// Inverse standard normal CDF: Acklam's rational approximation refined
/// by one Halley step. Requires 0 < p < 1.
double normal_ppf(double p);

/// Regularized incomplete beta I_x(a, b), evaluated with the Lentz
/// continued fraction on the fast-converging side.
double incomplete_beta(double a, double b, double x);

/// Regularized lower incomplete gamma P(a, x) (series/continued fraction).
double incomplete_gamma(double a, double x);

/// Student-t CDF with df degrees of freedom.
double student_t_cdf(double t, double df);

/// Two-sided tail probability of |T| >= |t| under Student-t.
double student_t_two_sided(double t, double df);

/// Student-t quantile (bracketed Newton on the CDF). Requires 0 < p < 1.
double student_t_ppf(double p, double df);

/// Chi-squared survival function P(X >= x) with k degrees of freedom.
double chi_squared_sf(double x, double k);

}  // namespace evalforge
