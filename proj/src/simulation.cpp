#include "mixtest/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "mixtest/comparators.hpp"
#include "mixtest/limit_dist.hpp"

namespace mixtest {

namespace {

// Salt separating the critical-value stream from the power-study stream.
constexpr std::uint64_t kCriticalSeedSalt = 0xC2B2AE3D27D4EB4FULL;

// Runs fn(r) for r in [0, reps) across `threads` workers; any exception is
// rethrown in the caller. Results must be written to per-index slots so the
// outcome is independent of scheduling.
void parallel_replicates(int reps, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1) {
    for (int r = 0; r < reps; ++r) fn(r);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= reps) break;
      try {
        fn(r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        break;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads) - 1);
  for (int t = 0; t < threads - 1; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<double> null_statistics(Method method, int n, int reps, std::uint64_t seed,
                                    const EMTestConfig& cfg, int threads) {
  const ModelSpec null_spec = null_model();
  std::vector<double> stats(static_cast<std::size_t>(reps));
  parallel_replicates(reps, threads, [&](int r) {
    RandomStream stream = RandomStream::substream(seed, static_cast<std::uint64_t>(r));
    const Sample s = draw_sample(null_spec, n, stream);
    stats[static_cast<std::size_t>(r)] = eval_statistic(method, s, cfg);
  });
  return stats;
}

void require_study_args(int n, int reps) {
  if (n < 2) throw std::invalid_argument("sample size must be >= 2");
  if (reps < 1000) throw std::invalid_argument("replication count must be >= 1000");
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::em_equal: return "em-equal";
    case Method::em_unequal: return "em-unequal";
    case Method::mlrt_equal: return "mlrt-equal";
    case Method::mlrt_unequal: return "mlrt-unequal";
    case Method::lrt_equal: return "lrt-equal";
  }
  throw std::logic_error("unknown method");
}

Method parse_method(const std::string& name) {
  if (name == "em-equal") return Method::em_equal;
  if (name == "em-unequal") return Method::em_unequal;
  if (name == "mlrt-equal") return Method::mlrt_equal;
  if (name == "mlrt-unequal") return Method::mlrt_unequal;
  if (name == "lrt-equal") return Method::lrt_equal;
  throw std::invalid_argument(
      "unknown method '" + name +
      "' (expected em-equal, em-unequal, mlrt-equal, mlrt-unequal, or lrt-equal)");
}

void ModelSpec::validate() const {
  if (!(one_minus_alpha > 0.0 && one_minus_alpha < 1.0)) {
    throw std::invalid_argument("model weight 1-alpha must lie in (0, 1)");
  }
  if (!(sigma1 > 0.0) || !(sigma2 > 0.0)) {
    throw std::invalid_argument("model standard deviations must be positive");
  }
  if (!std::isfinite(theta1) || !std::isfinite(theta2)) {
    throw std::invalid_argument("model means must be finite");
  }
}

const std::vector<ModelSpec>& model_registry() {
  static const std::vector<ModelSpec> registry = {
      {"I", 0.50, -1.15, 1.20, 1.00, 1.00},  {"II", 0.25, -1.15, 1.15, 1.00, 1.00},
      {"III", 0.10, -1.30, 1.30, 1.00, 1.00}, {"IV", 0.05, -1.55, 1.55, 1.00, 1.00},
      {"V", 0.50, 0.00, 0.00, 1.20, 0.50},   {"VI", 0.25, 0.00, 0.00, 1.15, 0.50},
      {"VII", 0.10, 0.00, 0.00, 1.40, 0.50}, {"VIII", 0.05, 0.00, 0.00, 1.85, 0.50},
      {"IX", 0.50, 0.75, -0.75, 1.20, 0.80}, {"X", 0.25, 0.65, -0.65, 1.20, 0.80},
      {"XI", 0.10, 0.85, -0.85, 1.20, 0.80}, {"XII", 0.05, 1.15, -1.15, 1.20, 0.80},
  };
  return registry;
}

const ModelSpec& lookup_model(const std::string& name) {
  for (const ModelSpec& m : model_registry()) {
    if (m.name == name) return m;
  }
  throw std::invalid_argument("unknown model '" + name + "' (expected I through XII)");
}

ModelSpec null_model() { return {"null", 0.5, 0.0, 0.0, 1.0, 1.0}; }

Sample draw_sample(const ModelSpec& spec, int n, RandomStream& stream) {
  spec.validate();
  if (n < 2) throw std::invalid_argument("sample size must be >= 2");
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (double& x : xs) {
    // Two draws per observation (component label, then variate) keeps the
    // stream layout fixed no matter which component is hit.
    const double u = stream.next_uniform();
    const double z = stream.next_normal();
    x = u < spec.one_minus_alpha ? spec.theta1 + spec.sigma1 * z
                                 : spec.theta2 + spec.sigma2 * z;
  }
  return Sample(std::move(xs));
}

double eval_statistic(Method method, const Sample& sample, const EMTestConfig& config) {
  switch (method) {
    case Method::em_equal: return em_test(sample, config).statistic;
    case Method::em_unequal: return em_test_unequal(sample, config).statistic;
    case Method::mlrt_equal: return mlrt_equal(sample);
    case Method::mlrt_unequal: return mlrt_unequal(sample);
    case Method::lrt_equal: return lrt_equal(sample);
  }
  throw std::logic_error("unknown method");
}

bool has_asymptotic_law(Method method) {
  return method == Method::em_equal || method == Method::em_unequal ||
         method == Method::mlrt_equal;
}

double asymptotic_pvalue(Method method, double statistic, const EMTestConfig& config) {
  switch (method) {
    case Method::em_equal: {
      const double d = delta(config.alphas);
      if (config.refined_small_alpha) {
        return std::clamp(1.0 - chi1_cdf(statistic - d), 0.0, 1.0);
      }
      return pvalue_equal(statistic, d);
    }
    case Method::em_unequal:
      return pvalue_unequal(statistic);
    case Method::mlrt_equal:
      // Reference law: chi-square(2).
      return pvalue_unequal(statistic);
    case Method::mlrt_unequal:
    case Method::lrt_equal:
      throw std::invalid_argument(method_name(method) +
                                  " has no closed-form reference law; use simulated "
                                  "critical values");
  }
  throw std::logic_error("unknown method");
}

double quantile_type7(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile level outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

double CriticalValueTable::at(double level) const {
  for (const auto& [lvl, value] : level_value) {
    if (lvl == level) return value;
  }
  throw std::invalid_argument("critical value table has no entry for the requested level");
}

CriticalValueTable simulate_critical_values(Method method, int n, int reps,
                                            std::vector<double> levels, std::uint64_t seed,
                                            const EMTestConfig& config, int threads) {
  require_study_args(n, reps);
  if (levels.empty()) throw std::invalid_argument("need at least one level");
  for (double lvl : levels) {
    if (!(lvl > 0.0 && lvl < 1.0)) {
      throw std::invalid_argument("levels must lie in (0, 1)");
    }
  }
  config.validate();
  const int workers = resolve_threads(threads);
  std::vector<double> stats = null_statistics(method, n, reps, seed, config, workers);

  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  CriticalValueTable table;
  table.method = method;
  table.n = n;
  table.reps = reps;
  table.seed = seed;
  for (double lvl : levels) {
    table.level_value.emplace_back(lvl, quantile_type7(stats, 1.0 - lvl));
  }
  return table;
}

SimReport type1_study(Method method, int n, int reps, std::vector<double> levels,
                      std::uint64_t seed, const EMTestConfig& config, int threads) {
  const auto start = std::chrono::steady_clock::now();
  require_study_args(n, reps);
  if (levels.empty()) throw std::invalid_argument("need at least one level");
  for (double lvl : levels) {
    if (!(lvl > 0.0 && lvl <= 1.0)) {
      throw std::invalid_argument("levels must lie in (0, 1]");
    }
  }
  config.validate();
  if (!has_asymptotic_law(method)) {
    throw std::invalid_argument(method_name(method) +
                                " has no asymptotic critical values; run a power study on "
                                "the null model with simulated critical values instead");
  }
  const int workers = resolve_threads(threads);
  std::vector<double> stats = null_statistics(method, n, reps, seed, config, workers);

  SimReport report;
  report.method = method;
  report.study = "type1";
  report.model = null_model();
  report.n = n;
  report.reps = reps;
  report.seed = seed;
  report.critical_source = CriticalSource::asymptotic;
  for (double lvl : levels) {
    int rejections = 0;
    for (double t : stats) {
      if (asymptotic_pvalue(method, t, config) <= lvl) ++rejections;
    }
    const double rate = static_cast<double>(rejections) / static_cast<double>(reps);
    report.rates.push_back({lvl, rate, std::sqrt(rate * (1.0 - rate) / reps)});
  }
  report.wall_time_s = elapsed_seconds(start);
  return report;
}

SimReport power_study(Method method, const ModelSpec& spec, int n, int reps, double level,
                      CriticalSource critical, std::uint64_t seed, const EMTestConfig& config,
                      int crit_reps, int threads) {
  return power_study(method, spec, n, reps, std::vector<double>{level}, critical, seed, config,
                     crit_reps, threads);
}

SimReport power_study(Method method, const ModelSpec& spec, int n, int reps,
                      std::vector<double> levels, CriticalSource critical, std::uint64_t seed,
                      const EMTestConfig& config, int crit_reps, int threads) {
  const auto start = std::chrono::steady_clock::now();
  require_study_args(n, reps);
  if (levels.empty()) throw std::invalid_argument("need at least one level");
  for (double lvl : levels) {
    if (!(lvl > 0.0 && lvl <= 1.0)) {
      throw std::invalid_argument("levels must lie in (0, 1]");
    }
  }
  spec.validate();
  config.validate();
  const int workers = resolve_threads(threads);

  SimReport report;
  report.method = method;
  report.study = "power";
  report.model = spec;
  report.n = n;
  report.reps = reps;
  report.seed = seed;
  report.critical_source = critical;

  if (critical == CriticalSource::simulated) {
    // Always tabulate the three conventional levels so the table's entries do
    // not depend on which subset was requested.
    std::vector<double> table_levels{0.10, 0.05, 0.01};
    for (double lvl : levels) {
      if (std::find(table_levels.begin(), table_levels.end(), lvl) == table_levels.end()) {
        table_levels.push_back(lvl);
      }
    }
    report.critical_values = simulate_critical_values(
        method, n, crit_reps, table_levels, seed ^ kCriticalSeedSalt, config, threads);
  } else if (!has_asymptotic_law(method)) {
    throw std::invalid_argument(method_name(method) +
                                " has no asymptotic critical values; use --critical simulated");
  }

  std::vector<double> stats(static_cast<std::size_t>(reps));
  parallel_replicates(reps, workers, [&](int r) {
    RandomStream stream = RandomStream::substream(seed, static_cast<std::uint64_t>(r));
    const Sample s = draw_sample(spec, n, stream);
    stats[static_cast<std::size_t>(r)] = eval_statistic(method, s, config);
  });

  for (double level : levels) {
    const double crit_value =
        critical == CriticalSource::simulated ? report.critical_values->at(level) : 0.0;
    int rejections = 0;
    for (double t : stats) {
      const bool reject = critical == CriticalSource::simulated
                              ? t >= crit_value
                              : asymptotic_pvalue(method, t, config) <= level;
      if (reject) ++rejections;
    }
    const double rate = static_cast<double>(rejections) / static_cast<double>(reps);
    report.rates.push_back({level, rate, std::sqrt(rate * (1.0 - rate) / reps)});
  }
  report.wall_time_s = elapsed_seconds(start);
  return report;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("MIXTEST_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace mixtest
