#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "mixtest/comparators.hpp"
#include "mixtest/limit_dist.hpp"
#include "mixtest/simulation.hpp"
#include "support/approx.hpp"

using namespace mixtest;
using testsup::rel;

TEST_SUITE("simulation") {

TEST_CASE("model registry holds the twelve power alternatives") {
  const std::vector<ModelSpec>& reg = model_registry();
  REQUIRE(reg.size() == 12);
  // name, 1-alpha, theta1, theta2, sigma1, sigma2
  const struct {
    const char* name;
    double w, t1, t2, s1, s2;
  } expect[] = {
      {"I", 0.50, -1.15, 1.20, 1.00, 1.00},  {"II", 0.25, -1.15, 1.15, 1.00, 1.00},
      {"III", 0.10, -1.30, 1.30, 1.00, 1.00}, {"IV", 0.05, -1.55, 1.55, 1.00, 1.00},
      {"V", 0.50, 0.00, 0.00, 1.20, 0.50},   {"VI", 0.25, 0.00, 0.00, 1.15, 0.50},
      {"VII", 0.10, 0.00, 0.00, 1.40, 0.50}, {"VIII", 0.05, 0.00, 0.00, 1.85, 0.50},
      {"IX", 0.50, 0.75, -0.75, 1.20, 0.80}, {"X", 0.25, 0.65, -0.65, 1.20, 0.80},
      {"XI", 0.10, 0.85, -0.85, 1.20, 0.80}, {"XII", 0.05, 1.15, -1.15, 1.20, 0.80},
  };
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(reg[i].name == expect[i].name);
    CHECK(reg[i].one_minus_alpha == expect[i].w);
    CHECK(reg[i].theta1 == expect[i].t1);
    CHECK(reg[i].theta2 == expect[i].t2);
    CHECK(reg[i].sigma1 == expect[i].s1);
    CHECK(reg[i].sigma2 == expect[i].s2);
    CHECK_NOTHROW(reg[i].validate());
  }
  CHECK(lookup_model("XII").theta1 == 1.15);
  CHECK_THROWS_WITH_AS(lookup_model("XIII"),
                       "unknown model 'XIII' (expected I through XII)",
                       std::invalid_argument);

  const ModelSpec null_spec = null_model();
  CHECK(null_spec.one_minus_alpha == 0.5);
  CHECK(null_spec.theta1 == 0.0);
  CHECK(null_spec.theta2 == 0.0);
  CHECK(null_spec.sigma1 == 1.0);
  CHECK(null_spec.sigma2 == 1.0);
  CHECK_NOTHROW(null_spec.validate());
}

TEST_CASE("model validation rejects out-of-range fields") {
  ModelSpec bad{"custom", 0.0, 0.0, 0.0, 1.0, 1.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {"custom", 0.5, 0.0, 0.0, -1.0, 1.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {"custom", 0.5, std::nan(""), 0.0, 1.0, 1.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("method names round-trip") {
  for (Method m : {Method::em_equal, Method::em_unequal, Method::mlrt_equal,
                   Method::mlrt_unequal, Method::lrt_equal}) {
    CHECK(parse_method(method_name(m)) == m);
  }
  CHECK_THROWS_AS(parse_method("bogus"), std::invalid_argument);
}

TEST_CASE("draw_sample is deterministic and uses two draws per observation") {
  RandomStream a = RandomStream::substream(42, 0);
  RandomStream b = RandomStream::substream(42, 0);
  const Sample s1 = draw_sample(lookup_model("IX"), 64, a);
  const Sample s2 = draw_sample(lookup_model("IX"), 64, b);
  CHECK(s1.values() == s2.values());

  // stream position after n observations equals 2n raw uniforms
  RandomStream c = RandomStream::substream(42, 0);
  for (int i = 0; i < 2 * 64; ++i) c.next_uniform();
  CHECK(a.next_uniform() == c.next_uniform());

  RandomStream d(7);
  CHECK_THROWS_AS(draw_sample(null_model(), 1, d), std::invalid_argument);
}

TEST_CASE("draw_sample moments: degenerate mixture") {
  ModelSpec spec{"custom", 0.4, 0.7, 0.7, 1.3, 1.3};
  RandomStream stream(2024);
  const int n = 100000;
  const Sample s = draw_sample(spec, n, stream);
  const double se_mean = 1.3 / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(s.mean() - 0.7) < 5.0 * se_mean);
  const double var = 1.3 * 1.3;
  const double se_var = var * std::sqrt(2.0 / static_cast<double>(n));
  CHECK(std::abs(s.var_n() - var) < 5.0 * se_var);
}

TEST_CASE("draw_sample moments: first registered alternative") {
  RandomStream stream(99);
  const int n = 1000000;
  const Sample s = draw_sample(lookup_model("I"), n, stream);
  // mean = 0.5(-1.15) + 0.5(1.20) = 0.025; var = 1 + mixture-of-means spread
  const double mu = 0.025;
  const double var = 0.5 * (1.0 + 1.15 * 1.15) + 0.5 * (1.0 + 1.20 * 1.20) - mu * mu;
  const double se_mean = std::sqrt(var / static_cast<double>(n));
  CHECK(std::abs(s.mean() - mu) < 5.0 * se_mean);
}

TEST_CASE("eval_statistic dispatches to the named procedures") {
  RandomStream stream(606);
  const Sample s = draw_sample(null_model(), 40, stream);
  const EMTestConfig cfg;
  CHECK(eval_statistic(Method::em_equal, s, cfg) == em_test(s, cfg).statistic);
  CHECK(eval_statistic(Method::em_unequal, s, cfg) == em_test_unequal(s, cfg).statistic);
  CHECK(eval_statistic(Method::mlrt_equal, s) == mlrt_equal(s));
  CHECK(eval_statistic(Method::mlrt_unequal, s) == mlrt_unequal(s));
  CHECK(eval_statistic(Method::lrt_equal, s) == lrt_equal(s));
}

TEST_CASE("asymptotic reference laws") {
  CHECK(has_asymptotic_law(Method::em_equal));
  CHECK(has_asymptotic_law(Method::em_unequal));
  CHECK(has_asymptotic_law(Method::mlrt_equal));
  CHECK_FALSE(has_asymptotic_law(Method::mlrt_unequal));
  CHECK_FALSE(has_asymptotic_law(Method::lrt_equal));

  EMTestConfig cfg;
  CHECK(asymptotic_pvalue(Method::em_equal, 2.1, cfg) ==
        pvalue_equal(2.1, delta(cfg.alphas)));
  cfg.alphas = {0.2, 0.5};
  CHECK(asymptotic_pvalue(Method::em_equal, 2.1, cfg) ==
        pvalue_equal(2.1, delta(cfg.alphas)));
  CHECK(asymptotic_pvalue(Method::em_unequal, 3.3) == pvalue_unequal(3.3));
  CHECK(asymptotic_pvalue(Method::mlrt_equal, 3.3) == rel(chi_square_sf(3.3, 2), 1e-14));
  CHECK_THROWS_AS(asymptotic_pvalue(Method::lrt_equal, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(asymptotic_pvalue(Method::mlrt_unequal, 1.0), std::invalid_argument);
}

TEST_CASE("type-7 quantiles") {
  CHECK(quantile_type7({1.0, 2.0, 3.0, 4.0}, 0.5) == 2.5);
  CHECK(quantile_type7({1.0, 2.0, 3.0, 4.0}, 0.0) == 1.0);
  CHECK(quantile_type7({1.0, 2.0, 3.0, 4.0}, 1.0) == 4.0);
  CHECK(quantile_type7({3.0, 1.0, 2.0}, 1.0) == 3.0);  // sorts internally
  CHECK(quantile_type7({10.0, 20.0}, 0.25) == rel(12.5, 1e-15));
  CHECK(quantile_type7({5.0}, 0.37) == 5.0);
  CHECK_THROWS_AS(quantile_type7({}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(quantile_type7({1.0}, 1.5), std::invalid_argument);
}

TEST_CASE("simulated critical values: determinism and worker invariance") {
  const EMTestConfig cfg;
  const CriticalValueTable t1 =
      simulate_critical_values(Method::em_equal, 10, 1000, {0.10, 0.05}, 77, cfg, 1);
  const CriticalValueTable t2 =
      simulate_critical_values(Method::em_equal, 10, 1000, {0.10, 0.05}, 77, cfg, 1);
  REQUIRE(t1.level_value.size() == 2);
  CHECK(t1.level_value == t2.level_value);

  const CriticalValueTable t3 =
      simulate_critical_values(Method::em_equal, 10, 1000, {0.05, 0.10}, 77, cfg, 3);
  CHECK(t1.level_value == t3.level_value);  // scheduling cannot move results

  // levels are reported sorted descending, values nonincreasing in level
  CHECK(t1.level_value[0].first == 0.10);
  CHECK(t1.level_value[1].first == 0.05);
  CHECK(t1.at(0.05) >= t1.at(0.10));
  CHECK(t1.method == Method::em_equal);
  CHECK(t1.n == 10);
  CHECK(t1.reps == 1000);
  CHECK(t1.seed == 77);
  CHECK_THROWS_AS(t1.at(0.2), std::invalid_argument);
}

TEST_CASE("simulated critical values: duplicate levels collapse") {
  const CriticalValueTable t = simulate_critical_values(
      Method::em_equal, 10, 1000, {0.05, 0.10, 0.05}, 31, EMTestConfig{}, 1);
  CHECK(t.level_value.size() == 2);
}

TEST_CASE("simulated critical values: argument validation") {
  CHECK_THROWS_AS(simulate_critical_values(Method::em_equal, 10, 999, {0.05}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(simulate_critical_values(Method::em_equal, 1, 1000, {0.05}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(simulate_critical_values(Method::em_equal, 10, 1000, {}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(simulate_critical_values(Method::em_equal, 10, 1000, {0.0}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(simulate_critical_values(Method::em_equal, 10, 1000, {1.0}, 1),
                  std::invalid_argument);
}

TEST_CASE("type-I study: validation, degenerate level, and report shape") {
  CHECK_THROWS_AS(type1_study(Method::em_equal, 20, 999, {0.05}, 1), std::invalid_argument);
  CHECK_THROWS_AS(type1_study(Method::lrt_equal, 20, 1000, {0.05}, 1), std::invalid_argument);
  CHECK_THROWS_AS(type1_study(Method::mlrt_unequal, 20, 1000, {0.05}, 1),
                  std::invalid_argument);

  const SimReport rep = type1_study(Method::em_equal, 20, 1000, {1.0, 0.10}, 555);
  CHECK(rep.study == "type1");
  CHECK(rep.method == Method::em_equal);
  CHECK(rep.n == 20);
  CHECK(rep.reps == 1000);
  CHECK(rep.seed == 555);
  CHECK(rep.critical_source == CriticalSource::asymptotic);
  REQUIRE(rep.rates.size() == 2);
  CHECK(rep.rates[0].level == 1.0);
  CHECK(rep.rates[0].rate == 1.0);  // p-values never exceed 1
  CHECK(rep.rates[0].std_error == 0.0);
  CHECK(rep.rates[1].rate >= 0.0);
  CHECK(rep.rates[1].rate <= 1.0);
  const double r = rep.rates[1].rate;
  CHECK(rep.rates[1].std_error == rel(std::sqrt(r * (1.0 - r) / 1000.0), 1e-12));
  CHECK(rep.wall_time_s >= 0.0);
}

TEST_CASE("power study on the null model reproduces the type-I rates exactly") {
  const std::vector<double> levels{0.10, 0.05};
  const SimReport t1 = type1_study(Method::em_equal, 20, 1000, levels, 4321);
  const SimReport pw = power_study(Method::em_equal, null_model(), 20, 1000, levels,
                                   CriticalSource::asymptotic, 4321);
  REQUIRE(t1.rates.size() == pw.rates.size());
  for (std::size_t i = 0; i < t1.rates.size(); ++i) {
    CHECK(t1.rates[i].level == pw.rates[i].level);
    CHECK(t1.rates[i].rate == pw.rates[i].rate);  // same replicate streams
  }
  CHECK_FALSE(pw.critical_values.has_value());
}

TEST_CASE("power study at simulated critical values is near its nominal size") {
  const SimReport rep = power_study(Method::em_equal, null_model(), 20, 1000, 0.10,
                                    CriticalSource::simulated, 8181, EMTestConfig{}, 1000);
  REQUIRE(rep.rates.size() == 1);
  CHECK(rep.critical_values.has_value());
  CHECK(rep.critical_values->seed != 8181);  // independent table stream
  // two independent 1000-rep binomials: allow a generous joint band
  CHECK(std::abs(rep.rates[0].rate - 0.10) < 0.06);
}

TEST_CASE("multi-level power rows equal the single-level rows") {
  const SimReport multi =
      power_study(Method::em_equal, lookup_model("I"), 20, 1000, {0.10, 0.05},
                  CriticalSource::simulated, 121, EMTestConfig{}, 1000);
  const SimReport single =
      power_study(Method::em_equal, lookup_model("I"), 20, 1000, 0.05,
                  CriticalSource::simulated, 121, EMTestConfig{}, 1000);
  REQUIRE(multi.rates.size() == 2);
  REQUIRE(single.rates.size() == 1);
  CHECK(multi.rates[1].level == 0.05);
  CHECK(multi.rates[1].rate == single.rates[0].rate);
  CHECK(multi.critical_values->at(0.05) == single.critical_values->at(0.05));
  CHECK(multi.study == "power");
  CHECK(multi.model.name == "I");
}

TEST_CASE("power study validation") {
  CHECK_THROWS_AS(power_study(Method::em_equal, null_model(), 20, 999, 0.05,
                              CriticalSource::asymptotic, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(power_study(Method::lrt_equal, null_model(), 20, 1000, 0.05,
                              CriticalSource::asymptotic, 1),
                  std::invalid_argument);
  ModelSpec bad{"custom", 1.5, 0.0, 0.0, 1.0, 1.0};
  CHECK_THROWS_AS(power_study(Method::em_equal, bad, 20, 1000, 0.05,
                              CriticalSource::asymptotic, 1),
                  std::invalid_argument);
}

TEST_CASE("worker-count resolution") {
  CHECK(resolve_threads(3) == 3);
  CHECK(resolve_threads(1) == 1);
  setenv("MIXTEST_THREADS", "2", 1);
  CHECK(resolve_threads(0) == 2);
  setenv("MIXTEST_THREADS", "junk", 1);
  CHECK(resolve_threads(0) >= 1);
  unsetenv("MIXTEST_THREADS");
  CHECK(resolve_threads(0) >= 1);
}

}  // TEST_SUITE
