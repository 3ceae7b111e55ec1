#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "mixtest/normal.hpp"
#include "mixtest/rng.hpp"
#include "support/approx.hpp"
#include "support/quadrature.hpp"
#include "support/ref_values.hpp"

using namespace mixtest;
using testsup::rel;

TEST_SUITE("normal") {

TEST_CASE("erf matches frozen references") {
  CHECK(mixtest::erf(0.1) == rel(refval::kErf_01, 1e-14));
  CHECK(mixtest::erf(0.46875) == rel(refval::kErf_046875, 1e-14));
  CHECK(mixtest::erf(0.5) == rel(refval::kErf_05, 1e-14));
  CHECK(mixtest::erf(1.0) == rel(refval::kErf_10, 1e-14));
  CHECK(mixtest::erf(2.0) == rel(refval::kErf_20, 1e-14));
  CHECK(mixtest::erf(0.0) == 0.0);
  CHECK(mixtest::erf(-1.0) == -mixtest::erf(1.0));
}

TEST_CASE("erfc matches frozen references across its branches") {
  CHECK(mixtest::erfc(0.1) == rel(refval::kErfc_01, 1e-14));
  CHECK(mixtest::erfc(0.5) == rel(refval::kErfc_05, 1e-14));
  CHECK(mixtest::erfc(1.0) == rel(refval::kErfc_10, 1e-13));
  CHECK(mixtest::erfc(2.0) == rel(refval::kErfc_20, 1e-13));
  // branch switch near 4 and decade-deep tails
  CHECK(mixtest::erfc(3.9) == rel(refval::kErfc_39, 1e-12));
  CHECK(mixtest::erfc(4.1) == rel(refval::kErfc_41, 1e-12));
  CHECK(mixtest::erfc(6.0) == rel(refval::kErfc_60, 1e-12));
  CHECK(mixtest::erfc(26.6) == rel(refval::kErfc_266, 1e-9));  // subnormal regime
  CHECK(mixtest::erfc(27.0) == 0.0);  // beyond the underflow cutoff
  CHECK(mixtest::erfc(-2.0) == rel(2.0 - refval::kErfc_20, 1e-14));
}

TEST_CASE("erf agrees with the quadrature oracle") {
  const double two_over_sqrt_pi = 1.1283791670955126;
  for (double x : {0.05, 0.3, 0.46875, 0.7, 1.3, 2.5, 3.7, 4.5}) {
    const double oracle =
        two_over_sqrt_pi *
        testsup::adaptive_simpson([](double t) { return std::exp(-t * t); }, 0.0, x, 1e-14);
    CHECK(mixtest::erf(x) == rel(oracle, 1e-12));
  }
}

TEST_CASE("erf agrees with the C library") {
  for (double x = -6.0; x <= 6.0; x += 0.0625) {
    CHECK(mixtest::erf(x) == doctest::Approx(std::erf(x)).epsilon(1e-13));
    CHECK(mixtest::erfc(x) == rel(std::erfc(x), 1e-12));
  }
}

TEST_CASE("normal cdf basics") {
  CHECK(std_normal_cdf(0.0) == rel(0.5, 1e-15));
  CHECK(std_normal_cdf(1.9599639845400543) == rel(0.975, 1e-13));
  CHECK(std_normal_cdf(-40.0) == 0.0);
  CHECK(std_normal_cdf(40.0) == 1.0);
  for (double x : {0.3, 1.1, 2.7, 5.0}) {
    CHECK(std_normal_cdf(x) + std_normal_cdf(-x) == rel(1.0, 1e-14));
  }
}

TEST_CASE("normal quantile matches frozen references") {
  CHECK(std_normal_quantile(1e-12) == rel(refval::kQuantile_1em12, 1e-14));
  CHECK(std_normal_quantile(1e-10) == rel(refval::kQuantile_1em10, 1e-14));
  CHECK(std_normal_quantile(1e-6) == rel(refval::kQuantile_1em6, 1e-14));
  CHECK(std_normal_quantile(0.001) == rel(refval::kQuantile_0001, 1e-14));
  CHECK(std_normal_quantile(0.025) == rel(refval::kQuantile_0025, 1e-14));
  CHECK(std_normal_quantile(0.1) == rel(refval::kQuantile_010, 1e-14));
  CHECK(std_normal_quantile(0.25) == rel(refval::kQuantile_025, 1e-14));
  CHECK(std_normal_quantile(0.5) == 0.0);
  // upper-tail symmetry of the implementation
  CHECK(std_normal_quantile(0.975) == rel(-refval::kQuantile_0025, 1e-13));
  CHECK(std_normal_quantile(0.999) == rel(-refval::kQuantile_0001, 1e-13));
}

TEST_CASE("quantile and cdf are mutual inverses") {
  RandomStream stream(99);
  for (int i = 0; i < 2000; ++i) {
    const double p = stream.next_uniform();
    const double x = std_normal_quantile(p);
    CHECK(std_normal_cdf(x) == doctest::Approx(p).epsilon(1e-12));
  }
  for (double p : {1e-14, 1e-9, 1e-5, 0.9999, 1.0 - 1e-9}) {
    CHECK(std_normal_cdf(std_normal_quantile(p)) == rel(p, 1e-9));
  }
}

TEST_CASE("quantile rejects out-of-range probabilities") {
  CHECK_THROWS_AS(std_normal_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(std_normal_quantile(1.0), std::domain_error);
  CHECK_THROWS_AS(std_normal_quantile(-0.5), std::domain_error);
  CHECK_THROWS_AS(std_normal_quantile(std::numeric_limits<double>::quiet_NaN()),
                  std::domain_error);
}

}  // TEST_SUITE
