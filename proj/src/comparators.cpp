#include "mixtest/comparators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mixtest/em.hpp"
#include "mixtest/golden.hpp"

namespace mixtest {

namespace {

constexpr double kAlphaMin = 1e-12;

double log4_alpha_penalty(double alpha) { return std::log(4.0 * alpha * (1.0 - alpha)); }

// Weighted component means with the previous-value guard; `ss` gets the
// pooled weighted sum of squared deviations.
void weighted_means(const Sample& s, const Weights& w, const MixtureParams& prev,
                    double& theta1, double& theta2, double& ss) {
  const std::vector<double>& xs = s.values();
  const std::size_t n = xs.size();
  double sum1 = 0.0, sum2 = 0.0, wx1 = 0.0, wx2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = w.w[i];
    const double vi = 1.0 - wi;
    sum1 += vi;
    wx1 += vi * xs[i];
    sum2 += wi;
    wx2 += wi * xs[i];
  }
  theta1 = sum1 == 0.0 ? prev.theta1 : wx1 / sum1;
  theta2 = sum2 == 0.0 ? prev.theta2 : wx2 / sum2;
  ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d1 = xs[i] - theta1;
    const double d2 = xs[i] - theta2;
    ss += (1.0 - w.w[i]) * d1 * d1 + w.w[i] * d2 * d2;
  }
}

// Objective policies. Each provides: the feasibility flag, the alpha M-step,
// the component M-step, and the objective itself.

struct MlrtEqualObjective {
  static constexpr bool kEqualVar = true;
  double eval(const Sample& s, const MixtureParams& p) const {
    return log_likelihood(s, p) + log4_alpha_penalty(p.alpha);
  }
  double alpha_step(double sum_w, double n) const {
    auto g = [&](double a) {
      return (n - sum_w) * std::log1p(-a) + sum_w * std::log(a) + log4_alpha_penalty(a);
    };
    return golden_section_max(g, kAlphaMin, 0.5, 1e-10);
  }
  MixtureParams component_step(const Sample& s, const Weights& w, double alpha,
                               const MixtureParams& prev) const {
    double theta1, theta2, ss;
    weighted_means(s, w, prev, theta1, theta2, ss);
    const double sigma =
        std::max(std::sqrt(ss / static_cast<double>(s.n())), 1e-11 * s.sd_n());
    return MixtureParams::equal(alpha, theta1, theta2, sigma);
  }
};

struct LrtEqualObjective {
  static constexpr bool kEqualVar = true;
  double eval(const Sample& s, const MixtureParams& p) const { return log_likelihood(s, p); }
  double alpha_step(double sum_w, double n) const {
    return std::clamp(sum_w / n, kAlphaMin, 0.5);
  }
  MixtureParams component_step(const Sample& s, const Weights& w, double alpha,
                               const MixtureParams& prev) const {
    double theta1, theta2, ss;
    weighted_means(s, w, prev, theta1, theta2, ss);
    const double sigma =
        std::max(std::sqrt(ss / static_cast<double>(s.n())), 1e-11 * s.sd_n());
    return MixtureParams::equal(alpha, theta1, theta2, sigma);
  }
};

struct MlrtUnequalObjective {
  static constexpr bool kEqualVar = false;
  PenaltySpec spec;
  double eval(const Sample& s, const MixtureParams& p) const {
    return modified_log_likelihood(s, p, spec);
  }
  double alpha_step(double sum_w, double n) const {
    return m_step_alpha(sum_w, static_cast<std::size_t>(n));
  }
  MixtureParams component_step(const Sample& s, const Weights& w, double alpha,
                               const MixtureParams& prev) const {
    const ComponentUpdate u = m_step_components_unequal(s, w, spec, prev);
    return MixtureParams::unequal(alpha, u.theta1, u.theta2, u.sigma1, u.sigma2);
  }
};

// Unequal-regime penalty restricted to a common scale; used only to seed
// mlrt_unequal with the best equal-variance point (nesting guarantee).
struct RestrictedEqualObjective {
  static constexpr bool kEqualVar = true;
  PenaltySpec spec;  // coefficient 0.25, applied twice
  double eval(const Sample& s, const MixtureParams& p) const {
    return log_likelihood(s, p) + 2.0 * penalty_sigma(p.sigma1, spec) +
           penalty_alpha(p.alpha);
  }
  double alpha_step(double sum_w, double n) const {
    return m_step_alpha(sum_w, static_cast<std::size_t>(n));
  }
  MixtureParams component_step(const Sample& s, const Weights& w, double alpha,
                               const MixtureParams& prev) const {
    double theta1, theta2, ss;
    weighted_means(s, w, prev, theta1, theta2, ss);
    const double var = (ss + spec.reference_var) / (static_cast<double>(s.n()) + 1.0);
    return MixtureParams::equal(alpha, theta1, theta2, std::sqrt(var));
  }
};

MixtureParams coerce_regime(MixtureParams p, bool equal_variance) {
  if (equal_variance) {
    if (p.sigma1 != p.sigma2) {
      const double pooled = std::sqrt(0.5 * (p.sigma1 * p.sigma1 + p.sigma2 * p.sigma2));
      p.sigma1 = p.sigma2 = pooled;
    }
    p.equal_variance = true;
  } else {
    p.equal_variance = false;
  }
  return p;
}

struct FitResult {
  MixtureParams params = MixtureParams::equal(0.5, 0.0, 0.0, 1.0);
  double objective = 0.0;
};

// Multi-start EM ascent shared by all comparator objectives: starts are the
// fixed-alpha families at 0.1 and 0.5 plus any caller-supplied points; the
// plain null point is always a candidate, so the supremum never falls below
// the null value.
template <class Objective>
FitResult maximize_objective(const Sample& s, const Objective& ob, const ComparatorConfig& cfg,
                             std::span<const MixtureParams> extra_starts) {
  cfg.validate();
  EMTestConfig start_cfg;
  start_cfg.starts = 5;
  start_cfg.start_seed = cfg.start_seed;

  std::vector<MixtureParams> starts = multi_start_points(s, 0.1, start_cfg, Objective::kEqualVar);
  {
    const std::vector<MixtureParams> more =
        multi_start_points(s, 0.5, start_cfg, Objective::kEqualVar);
    starts.insert(starts.end(), more.begin(), more.end());
  }
  for (const MixtureParams& p : extra_starts) {
    starts.push_back(coerce_regime(p, Objective::kEqualVar));
  }

  FitResult best;
  best.params = coerce_regime(
      MixtureParams::equal(0.5, s.mean(), s.mean(), s.sd_n()), Objective::kEqualVar);
  best.objective = ob.eval(s, best.params);

  const double tol_abs = cfg.tol * static_cast<double>(s.n());
  const double nn = static_cast<double>(s.n());
  Weights wbuf;
  for (MixtureParams p : starts) {
    double value = ob.eval(s, p);
    if (!std::isfinite(value)) continue;
    for (int it = 0; it < cfg.max_iter; ++it) {
      wbuf = e_step(s, p);
      const double alpha = ob.alpha_step(wbuf.sum, nn);
      const MixtureParams q = ob.component_step(s, wbuf, alpha, p);
      const double value_new = ob.eval(s, q);
      if (!(value_new >= value)) break;  // rounding noise at convergence
      const double gain = value_new - value;
      p = q;
      value = value_new;
      if (gain <= tol_abs) break;
    }
    if (value > best.objective) {
      best.objective = value;
      best.params = p;
    }
  }
  return best;
}

double null_log_likelihood(const Sample& s) {
  return log_likelihood(s, MixtureParams::equal(0.5, s.mean(), s.mean(), s.sd_n()));
}

}  // namespace

void ComparatorConfig::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
}

double mlrt_equal(const Sample& sample, const ComparatorConfig& config,
                  std::span<const MixtureParams> extra_starts) {
  const FitResult fit =
      maximize_objective(sample, MlrtEqualObjective{}, config, extra_starts);
  // The display compares unpenalized log-likelihoods; the null parameters are
  // feasible under the alternative, so the gap is never negative.
  const double gap = log_likelihood(sample, fit.params) - null_log_likelihood(sample);
  return std::max(0.0, 2.0 * gap);
}

double mlrt_unequal(const Sample& sample, const ComparatorConfig& config,
                    std::span<const MixtureParams> extra_starts) {
  const PenaltySpec spec = PenaltySpec::unequal(sample);
  // Seed with the best common-scale point so the supremum dominates the
  // equal-variance restriction by construction.
  const FitResult restricted =
      maximize_objective(sample, RestrictedEqualObjective{spec}, config, {});
  std::vector<MixtureParams> starts(extra_starts.begin(), extra_starts.end());
  starts.push_back(MixtureParams::unequal(restricted.params.alpha, restricted.params.theta1,
                                          restricted.params.theta2, restricted.params.sigma1,
                                          restricted.params.sigma2));
  const FitResult fit = maximize_objective(sample, MlrtUnequalObjective{spec}, config, starts);
  const double gap = fit.objective - fit_null_unequal(sample).pl0;
  return std::max(0.0, 2.0 * gap);
}

double lrt_equal(const Sample& sample, const ComparatorConfig& config,
                 std::span<const MixtureParams> extra_starts) {
  // Seeding with the modified-LRT argmax guarantees the plain LRT dominates
  // the unpenalized gap inside mlrt_equal.
  const FitResult mlrt_fit =
      maximize_objective(sample, MlrtEqualObjective{}, config, extra_starts);
  std::vector<MixtureParams> starts(extra_starts.begin(), extra_starts.end());
  starts.push_back(mlrt_fit.params);
  const FitResult fit = maximize_objective(sample, LrtEqualObjective{}, config, starts);
  const double gap = fit.objective - null_log_likelihood(sample);
  return std::max(0.0, 2.0 * gap);
}

}  // namespace mixtest
