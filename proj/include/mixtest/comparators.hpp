#pragma once

#include <cstdint>
#include <span>

#include "mixtest/mixture.hpp"
#include "mixtest/sample.hpp"

namespace mixtest {

struct ComparatorConfig {
  // EM stops when the objective gains less than tol per observation.
  double tol = 1e-8;
  int max_iter = 5000;
  std::uint64_t start_seed = 12345;

  void validate() const;
};

// Modified LRT, common variance: maximizes
//   l_n(alpha, theta1, theta2, sigma, sigma) + log(4 alpha (1 - alpha))
// over alpha in (0, 0.5] by multi-start EM (the alpha step is a 1-D
// golden-section maximization to 1e-10), then returns twice the UNPENALIZED
// log-likelihood gap against the plain null MLE (x-bar, sd). Compared against
// a chi-square(2) reference.
double mlrt_equal(const Sample& sample, const ComparatorConfig& config = {},
                  std::span<const MixtureParams> extra_starts = {});

// Modified LRT, unequal variances: full multi-start EM supremum of the
// penalized log-likelihood (0.25-coefficient penalties); twice the penalized
// gap against the penalized null fit. No closed-form reference law; use
// simulated critical values.
double mlrt_unequal(const Sample& sample, const ComparatorConfig& config = {},
                    std::span<const MixtureParams> extra_starts = {});

// Plain LRT, common variance: twice the unpenalized log-likelihood gap, with
// alpha restricted to (0, 0.5] (label symmetry makes that equivalent to
// (0, 1)). Simulated critical values only.
double lrt_equal(const Sample& sample, const ComparatorConfig& config = {},
                 std::span<const MixtureParams> extra_starts = {});

}  // namespace mixtest
