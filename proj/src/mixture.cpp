#include "mixtest/mixture.hpp"

#include <cmath>
#include <stdexcept>

namespace mixtest {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2*pi)

// Iterates below sigma_floor would overflow s_n^2/sigma^2; the penalty makes
// them never optimal, so they are rejected at the boundary instead.
double sigma_floor(const Sample& s) { return 1e-12 * s.sd_n(); }

}  // namespace

void MixtureParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 0.5)) {
    throw std::domain_error("mixing proportion must lie in (0, 0.5]");
  }
  if (!(sigma1 > 0.0) || !(sigma2 > 0.0)) {
    throw std::domain_error("component standard deviations must be positive");
  }
  if (!std::isfinite(theta1) || !std::isfinite(theta2) || !std::isfinite(sigma1) ||
      !std::isfinite(sigma2)) {
    throw std::domain_error("mixture parameters must be finite");
  }
  if (equal_variance && sigma1 != sigma2) {
    throw std::domain_error("equal-variance parameters require sigma1 == sigma2");
  }
}

void PenaltySpec::validate() const {
  if (sigma_coefficient != 1.0 && sigma_coefficient != 0.25) {
    throw std::domain_error("penalty coefficient must be 1 (common variance) or 0.25");
  }
  if (!(reference_var > 0.0)) {
    throw std::domain_error("penalty reference variance must be positive");
  }
}

double log_normal_density(double x, double theta, double sigma) {
  if (!(sigma > 0.0)) {
    throw std::domain_error("log_normal_density requires sigma > 0");
  }
  if (!std::isfinite(x) || !std::isfinite(theta) || !std::isfinite(sigma)) {
    throw std::domain_error("log_normal_density requires finite arguments");
  }
  const double z = (x - theta) / sigma;
  return -std::log(sigma) - 0.5 * kLog2Pi - 0.5 * z * z;
}

double log_likelihood(const Sample& sample, const MixtureParams& params) {
  params.validate();
  const double floor = sigma_floor(sample);
  if (params.sigma1 < floor || params.sigma2 < floor) {
    throw std::domain_error("component sigma below 1e-12 * sample sd");
  }

  // Coincident components: the mixture collapses to a single normal; summing
  // that density directly keeps the identity exact.
  if (params.theta1 == params.theta2 && params.sigma1 == params.sigma2) {
    double total = 0.0;
    for (double x : sample.values()) {
      total += log_normal_density(x, params.theta1, params.sigma1);
    }
    return total;
  }

  const double la1 = std::log1p(-params.alpha) - std::log(params.sigma1) - 0.5 * kLog2Pi;
  const double la2 = std::log(params.alpha) - std::log(params.sigma2) - 0.5 * kLog2Pi;
  double total = 0.0;
  for (double x : sample.values()) {
    const double z1 = (x - params.theta1) / params.sigma1;
    const double z2 = (x - params.theta2) / params.sigma2;
    const double a = la1 - 0.5 * z1 * z1;
    const double b = la2 - 0.5 * z2 * z2;
    const double m = a > b ? a : b;
    total += m + std::log(std::exp(a - m) + std::exp(b - m));
  }
  return total;
}

double penalty_sigma(double sigma, const PenaltySpec& spec) {
  spec.validate();
  if (!(sigma > 0.0)) {
    throw std::domain_error("penalty_sigma requires sigma > 0");
  }
  const double r = (sigma * sigma) / spec.reference_var;
  return -spec.sigma_coefficient * (1.0 / r + std::log(r));
}

double penalty_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::domain_error("penalty_alpha requires alpha in (0, 1)");
  }
  const double m = alpha < 1.0 - alpha ? alpha : 1.0 - alpha;
  return std::log(2.0 * m);
}

double modified_log_likelihood(const Sample& sample, const MixtureParams& params,
                               const PenaltySpec& spec) {
  spec.validate();
  const bool spec_is_equal = spec.sigma_coefficient == 1.0;
  if (params.equal_variance != spec_is_equal) {
    throw std::invalid_argument(
        "penalty spec does not match the parameter regime (coefficient 1 goes with the "
        "common-variance parameters, 0.25 with per-component variances)");
  }
  double value = log_likelihood(sample, params) + penalty_alpha(params.alpha);
  if (params.equal_variance) {
    value += penalty_sigma(params.sigma1, spec);
  } else {
    value += penalty_sigma(params.sigma1, spec) + penalty_sigma(params.sigma2, spec);
  }
  return value;
}

}  // namespace mixtest
