#include "mixtest/limit_dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mixtest/mixture.hpp"
#include "mixtest/normal.hpp"

namespace mixtest {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Survival function of chi-square(1); exact complement, no 1 - F cancellation.
double chi1_sf(double x) {
  if (x <= 0.0) return 1.0;
  return mixtest::erfc(std::sqrt(0.5 * x));
}

}  // namespace

double chi1_cdf(double x) {
  if (x <= 0.0) return 0.0;
  return mixtest::erf(std::sqrt(0.5 * x));
}

double chi2_cdf(double x) {
  if (x <= 0.0) return 0.0;
  return -std::expm1(-0.5 * x);
}

double chi_square_cdf(double x, int df) {
  if (x <= 0.0) return 0.0;
  switch (df) {
    case 1:
      return chi1_cdf(x);
    case 2:
      return chi2_cdf(x);
    case 3:
      return chi1_cdf(x) - std::sqrt(2.0 * x / kPi) * std::exp(-0.5 * x);
    case 4:
      return 1.0 - std::exp(-0.5 * x) * (1.0 + 0.5 * x);
    case 6:
      return 1.0 - std::exp(-0.5 * x) * (1.0 + 0.5 * x + 0.125 * x * x);
    default:
      throw std::invalid_argument("chi_square_cdf supports df in {1, 2, 3, 4, 6}");
  }
}

double chi_square_sf(double x, int df) {
  if (x <= 0.0) return 1.0;
  switch (df) {
    case 1:
      return chi1_sf(x);
    case 2:
      return std::exp(-0.5 * x);
    case 3:
      return chi1_sf(x) + std::sqrt(2.0 * x / kPi) * std::exp(-0.5 * x);
    case 4:
      return std::exp(-0.5 * x) * (1.0 + 0.5 * x);
    case 6:
      return std::exp(-0.5 * x) * (1.0 + 0.5 * x + 0.125 * x * x);
    default:
      throw std::invalid_argument("chi_square_sf supports df in {1, 2, 3, 4, 6}");
  }
}

double delta(const std::vector<double>& alphas) {
  double best = -std::numeric_limits<double>::infinity();
  for (double a : alphas) {
    if (!(a > 0.0 && a <= 0.5)) {
      throw std::domain_error("alpha values must lie in (0, 0.5]");
    }
    if (a == 0.5) continue;
    best = std::max(best, penalty_alpha(a));
  }
  return 2.0 * best;  // -inf when 0.5 is the only entry
}

double pvalue_equal(double t, double delta) {
  if (std::isnan(t) || t == std::numeric_limits<double>::infinity()) {
    throw std::domain_error("pvalue_equal requires a finite statistic");
  }
  if (delta > 0.0) {
    throw std::domain_error("delta must be nonpositive");
  }
  // 1 - (1 - c1)(1 - 0.5 c2) with c1 = SF(t - delta), c2 = SF(t).
  const double c1 = chi1_sf(t - delta);
  const double c2 = chi1_sf(t);
  const double p = c1 + 0.5 * c2 - 0.5 * c1 * c2;
  return std::clamp(p, 0.0, 1.0);
}

double pvalue_unequal(double t) {
  if (!std::isfinite(t)) {
    throw std::domain_error("pvalue_unequal requires a finite statistic");
  }
  if (t <= 0.0) return 1.0;
  return std::exp(-0.5 * t);
}

}  // namespace mixtest
