#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mixtest/mixture.hpp"
#include "mixtest/rng.hpp"
#include "mixtest/sample.hpp"
#include "support/approx.hpp"
#include "support/ref_values.hpp"

using namespace mixtest;
using testsup::rel;

namespace {

Sample random_sample(std::uint64_t seed, int n) {
  RandomStream stream(seed);
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (double& x : xs) x = stream.next_normal();
  return Sample(std::move(xs));
}

}  // namespace

TEST_SUITE("mixture") {

TEST_CASE("sample caches exact moments") {
  const Sample s({1.0, 2.0, 3.0});
  CHECK(s.n() == 3);
  CHECK(s.mean() == 2.0);
  CHECK(s.var_n() == 2.0 / 3.0);
  CHECK(s.sd_n() == std::sqrt(2.0 / 3.0));
}

TEST_CASE("sample rejects degenerate input") {
  CHECK_THROWS_AS(Sample({}), std::invalid_argument);
  CHECK_THROWS_AS(Sample({1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Sample({1.0, std::numeric_limits<double>::infinity()}), std::invalid_argument);
  CHECK_THROWS_AS(Sample({1.0, std::numeric_limits<double>::quiet_NaN()}), std::invalid_argument);
  CHECK_THROWS_AS(Sample({2.0, 2.0, 2.0}), std::invalid_argument);
}

TEST_CASE("mixture params validation") {
  CHECK_NOTHROW(MixtureParams::equal(0.5, -1.0, 1.0, 2.0).validate());
  CHECK_NOTHROW(MixtureParams::unequal(0.1, 0.0, 0.0, 1.0, 2.0).validate());
  CHECK_THROWS_AS(MixtureParams::equal(0.0, 0.0, 0.0, 1.0).validate(), std::domain_error);
  CHECK_THROWS_AS(MixtureParams::equal(0.6, 0.0, 0.0, 1.0).validate(), std::domain_error);
  CHECK_THROWS_AS(MixtureParams::equal(0.5, 0.0, 0.0, 0.0).validate(), std::domain_error);
  CHECK_THROWS_AS(MixtureParams::equal(0.5, 0.0, 0.0, -1.0).validate(), std::domain_error);
  const MixtureParams bad{0.5, 0.0, 0.0, 1.0, 2.0, true};  // equal flag, distinct sigmas
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
  CHECK_THROWS_AS(
      MixtureParams::equal(0.5, std::numeric_limits<double>::infinity(), 0.0, 1.0).validate(),
      std::domain_error);
}

TEST_CASE("log normal density anchors") {
  CHECK(log_normal_density(1.0, 0.0, 2.0) == rel(refval::kLogDensity_1_0_2, 1e-15));
  CHECK(log_normal_density(0.0, 0.0, 1.0) == rel(refval::kLogDensity_0_0_1, 1e-15));
  CHECK_THROWS_AS(log_normal_density(0.0, 0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(log_normal_density(std::numeric_limits<double>::quiet_NaN(), 0.0, 1.0),
                  std::domain_error);
}

TEST_CASE("coincident components collapse to a single normal exactly") {
  const Sample s = random_sample(7, 40);
  const MixtureParams p = MixtureParams::equal(0.3, 0.4, 0.4, 1.7);
  double direct = 0.0;
  for (double x : s.values()) direct += log_normal_density(x, 0.4, 1.7);
  CHECK(log_likelihood(s, p) == direct);  // bitwise: the fast path sums the same terms
}

TEST_CASE("log likelihood matches a naive direct evaluation") {
  const Sample s = random_sample(11, 60);
  const MixtureParams p = MixtureParams::unequal(0.25, -0.8, 1.1, 0.9, 1.6);
  const double kLog2Pi = 1.8378770664093454836;
  double naive = 0.0;
  for (double x : s.values()) {
    const double z1 = (x - p.theta1) / p.sigma1;
    const double z2 = (x - p.theta2) / p.sigma2;
    const double f1 = std::exp(-0.5 * z1 * z1 - 0.5 * kLog2Pi) / p.sigma1;
    const double f2 = std::exp(-0.5 * z2 * z2 - 0.5 * kLog2Pi) / p.sigma2;
    naive += std::log((1.0 - p.alpha) * f1 + p.alpha * f2);
  }
  CHECK(log_likelihood(s, p) == rel(naive, 1e-13));
}

TEST_CASE("log likelihood survives far-outlying observations") {
  // A 60-sigma point underflows the naive density but not the shifted form.
  const Sample s({-1.0, 1.0, 0.3, 60.0});
  const MixtureParams p = MixtureParams::unequal(0.5, 0.0, 0.1, 1.0, 1.0 + 1e-12);
  const double value = log_likelihood(s, p);
  CHECK(std::isfinite(value));
  CHECK(value < -1000.0);
}

TEST_CASE("sigma floor rejection") {
  const Sample s({-1.0, 0.0, 1.0});
  const MixtureParams p = MixtureParams::unequal(0.5, 0.0, 0.0, 1e-14, 1.0);
  CHECK_THROWS_AS(log_likelihood(s, p), std::domain_error);
}

TEST_CASE("sigma penalty anchor and stationarity") {
  const Sample s({-1.0, 1.0});  // var_n = 1
  const PenaltySpec spec = PenaltySpec::equal(s);
  CHECK(spec.sigma_coefficient == 1.0);
  CHECK(spec.reference_var == 1.0);
  CHECK(penalty_sigma(2.0, spec) == rel(refval::kSigmaPenalty_1_4, 1e-15));
  // maximum value -c at sigma = sd, for both coefficients
  CHECK(penalty_sigma(1.0, spec) == -1.0);
  const PenaltySpec spec_u = PenaltySpec::unequal(s);
  CHECK(penalty_sigma(1.0, spec_u) == -0.25);
  for (double sigma = 0.05; sigma < 4.0; sigma += 0.05) {
    CHECK(penalty_sigma(sigma, spec) <= -1.0);
    CHECK(penalty_sigma(sigma, spec_u) <= -0.25);
  }
  CHECK_THROWS_AS(penalty_sigma(0.0, spec), std::domain_error);
}

TEST_CASE("penalty spec accepts only the two published coefficients") {
  CHECK_THROWS_AS((PenaltySpec{0.5, 1.0}).validate(), std::domain_error);
  CHECK_THROWS_AS((PenaltySpec{1.0, 0.0}).validate(), std::domain_error);
  CHECK_NOTHROW((PenaltySpec{1.0, 2.0}).validate());
  CHECK_NOTHROW((PenaltySpec{0.25, 2.0}).validate());
}

TEST_CASE("alpha penalty values and symmetry") {
  CHECK(penalty_alpha(0.5) == 0.0);
  CHECK(penalty_alpha(0.3) == rel(refval::kLog06, 1e-15));
  CHECK(penalty_alpha(0.1) == rel(refval::kLog02, 1e-15));
  // 1 - 0.7 is not bitwise 0.3, so symmetry only holds to rounding
  CHECK(penalty_alpha(0.7) == rel(penalty_alpha(0.3), 1e-15));
  CHECK_THROWS_AS(penalty_alpha(0.0), std::domain_error);
  CHECK_THROWS_AS(penalty_alpha(1.0), std::domain_error);
}

TEST_CASE("modified log likelihood composes likelihood and penalties") {
  const Sample s = random_sample(23, 30);
  const PenaltySpec pe = PenaltySpec::equal(s);
  const MixtureParams p = MixtureParams::equal(0.3, -0.5, 0.7, 1.2);
  CHECK(modified_log_likelihood(s, p, pe) ==
        log_likelihood(s, p) + penalty_sigma(1.2, pe) + penalty_alpha(0.3));

  const PenaltySpec pu = PenaltySpec::unequal(s);
  const MixtureParams q = MixtureParams::unequal(0.2, -0.5, 0.7, 0.8, 1.4);
  CHECK(modified_log_likelihood(s, q, pu) ==
        log_likelihood(s, q) + penalty_sigma(0.8, pu) + penalty_sigma(1.4, pu) +
            penalty_alpha(0.2));
}

TEST_CASE("modified log likelihood rejects regime mismatches") {
  const Sample s = random_sample(29, 20);
  const MixtureParams pe = MixtureParams::equal(0.5, 0.0, 0.0, 1.0);
  const MixtureParams pu = MixtureParams::unequal(0.5, 0.0, 0.0, 1.0, 1.0);
  CHECK_THROWS_AS(modified_log_likelihood(s, pe, PenaltySpec::unequal(s)),
                  std::invalid_argument);
  CHECK_THROWS_AS(modified_log_likelihood(s, pu, PenaltySpec::equal(s)), std::invalid_argument);
}

}  // TEST_SUITE
