#pragma once

#include "mixtest/sample.hpp"

namespace mixtest {

// Parameters of the two-component normal mixture
//   (1 - alpha) N(theta1, sigma1^2) + alpha N(theta2, sigma2^2)
// with alpha restricted to (0, 0.5] (the model is label-exchangeable).
struct MixtureParams {
  double alpha;
  double theta1;
  double theta2;
  double sigma1;
  double sigma2;
  bool equal_variance;  // when set, sigma1 == sigma2 is required

  static MixtureParams equal(double alpha, double theta1, double theta2, double sigma) {
    return {alpha, theta1, theta2, sigma, sigma, true};
  }
  static MixtureParams unequal(double alpha, double theta1, double theta2, double sigma1,
                               double sigma2) {
    return {alpha, theta1, theta2, sigma1, sigma2, false};
  }
  bool operator==(const MixtureParams&) const = default;
  void validate() const;
};

// Variance-penalty configuration: coefficient 1 in the common-variance regime,
// 0.25 per component otherwise, always anchored at the sample's n-divisor variance.
struct PenaltySpec {
  double sigma_coefficient;
  double reference_var;

  static PenaltySpec equal(const Sample& s) { return {1.0, s.var_n()}; }
  static PenaltySpec unequal(const Sample& s) { return {0.25, s.var_n()}; }
  void validate() const;
};

double log_normal_density(double x, double theta, double sigma);

// Mixture log-likelihood, max-shifted per observation so nothing underflows.
double log_likelihood(const Sample& sample, const MixtureParams& params);

// -c * (s_n^2/sigma^2 + log(sigma^2/s_n^2)); maximized at sigma^2 = s_n^2 with value -c.
double penalty_sigma(double sigma, const PenaltySpec& spec);

// log(1 - |1 - 2*alpha|); zero at alpha = 0.5, -inf toward 0 or 1.
double penalty_alpha(double alpha);

// Penalized log-likelihood: log_likelihood plus one sigma penalty per distinct
// component scale plus the alpha penalty.
double modified_log_likelihood(const Sample& sample, const MixtureParams& params,
                               const PenaltySpec& spec);

}  // namespace mixtest
