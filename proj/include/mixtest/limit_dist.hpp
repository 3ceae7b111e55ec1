#pragma once

#include <vector>

namespace mixtest {

// Chi-square CDF with one degree of freedom: F(x) = erf(sqrt(x/2)).
double chi1_cdf(double x);

// Chi-square CDF with two degrees of freedom: 1 - exp(-x/2).
double chi2_cdf(double x);

// Closed-form chi-square CDFs for df in {1, 2, 3, 4, 6}; the higher orders are
// report annotations for the comparator tests, not decision rules.
double chi_square_cdf(double x, int df);

// Survival function 1 - chi_square_cdf(x, df), computed without the
// cancellation a literal complement would suffer in the far tail.
double chi_square_sf(double x, int df);

// Penalty-induced shift of the common-variance limit law:
//   delta = 2 * max over alpha_j != 0.5 of penalty_alpha(alpha_j).
// A set with no non-0.5 entry has no shift term; the -inf sentinel makes the
// F(x - delta) factor collapse to 1 (the 0.5*chi0 + 0.5*chi1 law).
double delta(const std::vector<double>& alphas);

// Tail probability of the common-variance limit law
//   G(x) = F(x - delta) * {0.5 + 0.5 F(x)},  F = chi1 CDF.
// Computed from complements so small p-values keep full precision.
double pvalue_equal(double t, double delta);

// Tail probability of the chi-square(2) limit: exp(-t/2).
double pvalue_unequal(double t);

}  // namespace mixtest
