#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mixtest/em.hpp"
#include "mixtest/rng.hpp"
#include "mixtest/sample.hpp"

namespace mixtest {

enum class Method { em_equal, em_unequal, mlrt_equal, mlrt_unequal, lrt_equal };

std::string method_name(Method m);
Method parse_method(const std::string& name);

// Generating model for power studies: component 1 with probability
// one_minus_alpha, component 2 otherwise.
struct ModelSpec {
  std::string name;
  double one_minus_alpha;
  double theta1, theta2;
  double sigma1, sigma2;

  void validate() const;
};

// The twelve registered alternatives (I..XII).
const std::vector<ModelSpec>& model_registry();
const ModelSpec& lookup_model(const std::string& name);
ModelSpec null_model();  // standard normal

Sample draw_sample(const ModelSpec& spec, int n, RandomStream& stream);

// Statistic of the chosen method on one sample; the EM config applies to the
// EM-test methods only.
double eval_statistic(Method method, const Sample& sample, const EMTestConfig& config = {});

// Tail probability under the method's asymptotic reference law; throws for
// methods whose null law is not available in closed form (lrt-equal,
// mlrt-unequal): those need simulated critical values.
double asymptotic_pvalue(Method method, double statistic, const EMTestConfig& config = {});
bool has_asymptotic_law(Method method);

struct CriticalValueTable {
  Method method = Method::em_equal;
  int n = 0;
  std::vector<std::pair<double, double>> level_value;  // sorted by level, descending
  int reps = 0;
  std::uint64_t seed = 0;

  double at(double level) const;  // exact-level lookup
};

// Empirical null quantiles (type-7 interpolation) of the statistic over reps
// standard-normal samples of size n. Deterministic given the seed; replicate
// r always uses the sub-stream (seed, r) regardless of worker scheduling.
CriticalValueTable simulate_critical_values(Method method, int n, int reps,
                                            std::vector<double> levels, std::uint64_t seed,
                                            const EMTestConfig& config = {}, int threads = 0);

// Type-7 empirical quantile of a sample (the linear-interpolation rule).
double quantile_type7(std::vector<double> values, double p);

struct LevelRate {
  double level;
  double rate;
  double std_error;  // binomial: sqrt(rate (1 - rate) / reps)
};

enum class CriticalSource { asymptotic, simulated };

struct SimReport {
  Method method = Method::em_equal;
  std::string study;  // "type1" or "power"
  ModelSpec model;
  int n = 0;
  int reps = 0;
  std::uint64_t seed = 0;
  CriticalSource critical_source = CriticalSource::asymptotic;
  std::vector<LevelRate> rates;
  std::optional<CriticalValueTable> critical_values;
  double wall_time_s = 0.0;
};

// Null rejection rates at asymptotic critical values (p-value <= level).
SimReport type1_study(Method method, int n, int reps, std::vector<double> levels,
                      std::uint64_t seed, const EMTestConfig& config = {}, int threads = 0);

// Rejection rate under `spec`. With simulated critical values the table is
// built first from an independently derived seed; rejection is then
// statistic >= critical value. Replicate streams depend only on (seed, r), so
// a null `spec` reproduces type1_study's rejections exactly.
SimReport power_study(Method method, const ModelSpec& spec, int n, int reps, double level,
                      CriticalSource critical, std::uint64_t seed,
                      const EMTestConfig& config = {}, int crit_reps = 5000, int threads = 0);

// Multi-level variant sharing one critical-value table and one set of
// replicate statistics across all levels; each level's row equals the
// single-level call's row exactly.
SimReport power_study(Method method, const ModelSpec& spec, int n, int reps,
                      std::vector<double> levels, CriticalSource critical, std::uint64_t seed,
                      const EMTestConfig& config = {}, int crit_reps = 5000, int threads = 0);

// Worker-count resolution: explicit request, else MIXTEST_THREADS, else the
// hardware count.
int resolve_threads(int requested);

}  // namespace mixtest
