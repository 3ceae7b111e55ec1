#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mixtest/mixture.hpp"
#include "mixtest/sample.hpp"

namespace mixtest {

struct EMTestConfig {
  // Initial mixing proportions; must contain 0.5 unless refined_small_alpha.
  std::vector<double> alphas{0.1, 0.3, 0.5};
  int iterations = 2;  // K: number of recorded iterates per alpha
  // Inner EM stops when the penalized log-likelihood gains less than
  // inner_tol per observation (an affine-invariant criterion).
  double inner_tol = 1e-8;
  int inner_max_iter = 2000;
  int starts = 5;  // multi-start count for the fixed-alpha maximization
  std::uint64_t start_seed = 12345;  // jitter stream for the perturbed starts
  // Small-alpha preset support: waives the 0.5-membership rule and switches
  // the p-value to the shifted chi-square(1) tail 1 - F1(t - delta).
  bool refined_small_alpha = false;

  void validate() const;
};

struct Weights {
  std::vector<double> w;  // posterior weight of component 2, one per observation
  double sum = 0.0;
};

struct NullFit {
  double theta0 = 0.0;
  double sigma0 = 0.0;
  double pl0 = 0.0;  // penalized log-likelihood at the null fit
};

struct EMTestResult {
  double statistic = 0.0;
  // m_trajectory[j][k-1] is the doubled penalized log-likelihood gap at
  // iterate k for alphas[j]; each row is nondecreasing and has K entries.
  std::vector<std::vector<double>> m_trajectory;
  int best_alpha_index = 0;
  MixtureParams fitted = MixtureParams::equal(0.5, 0.0, 0.0, 1.0);
  std::vector<MixtureParams> per_alpha_fits;  // final iterate for each alpha
  NullFit null_fit;
  double p_value = 1.0;
};

// Null fits: the penalty is stationary at sigma^2 = s_n^2 in both regimes, so
// the penalized null MLE coincides with (x-bar, sqrt(s_n^2)) in closed form.
NullFit fit_null(const Sample& sample);
NullFit fit_null_unequal(const Sample& sample);

Weights e_step(const Sample& sample, const MixtureParams& params);

// argmax over (0, 0.5] of (n - sum_w) log(1-a) + sum_w log(a) + penalty_alpha(a):
// min{(sum_w + 1)/(n + 1), 0.5}.
double m_step_alpha(double sum_w, std::size_t n);

struct ComponentUpdate {
  double theta1, theta2, sigma1, sigma2;
};

// Weighted-mean theta updates plus the closed-form penalized sigma update.
// An empty component keeps its previous location (and scale, in the unequal
// regime); `previous` supplies those values.
ComponentUpdate m_step_components(const Sample& sample, const Weights& weights,
                                  const PenaltySpec& spec, const MixtureParams& previous);
ComponentUpdate m_step_components_unequal(const Sample& sample, const Weights& weights,
                                          const PenaltySpec& spec,
                                          const MixtureParams& previous);

// Deterministic multi-start seeds for the fixed-alpha maximization: the null
// point, low/high count-based quantile splits, and symmetric +/- jitter pairs
// drawn from config.start_seed. Scale-equivariant by construction.
std::vector<MixtureParams> multi_start_points(const Sample& sample, double alpha,
                                              const EMTestConfig& config,
                                              bool equal_variance);

// Penalized maximization with the mixing weight frozen at alpha_j. At
// alpha_j = 0.5 the two component labelings are interchangeable; the returned
// fit puts the lighter posterior mass on the mixing-weight side (means ordered
// on near-exact ties), which keeps the downstream refinement affine-invariant.
MixtureParams inner_maximize_fixed_alpha(const Sample& sample, double alpha_j,
                                         const EMTestConfig& config = {});
MixtureParams inner_maximize_fixed_alpha_unequal(const Sample& sample, double alpha_j,
                                                 const EMTestConfig& config = {});

EMTestResult em_test(const Sample& sample, const EMTestConfig& config = {});
EMTestResult em_test_unequal(const Sample& sample, const EMTestConfig& config = {});

}  // namespace mixtest
