#include "mixtest/em.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "mixtest/limit_dist.hpp"
#include "mixtest/rng.hpp"

namespace mixtest {

namespace {

void e_step_into(const Sample& sample, const MixtureParams& p, Weights& out) {
  const std::size_t n = sample.n();
  out.w.resize(n);
  // w_i = 1 / (1 + exp(t_i)), t_i = log((1-a) f1 / (a f2)).
  const double log_ratio = std::log((1.0 - p.alpha) / p.alpha);
  const double lc1 = -std::log(p.sigma1);
  const double lc2 = -std::log(p.sigma2);
  const double inv1 = 1.0 / p.sigma1;
  const double inv2 = 1.0 / p.sigma2;
  double sum = 0.0;
  const std::vector<double>& xs = sample.values();
  for (std::size_t i = 0; i < n; ++i) {
    const double z1 = (xs[i] - p.theta1) * inv1;
    const double z2 = (xs[i] - p.theta2) * inv2;
    const double t = log_ratio + (lc1 - 0.5 * z1 * z1) - (lc2 - 0.5 * z2 * z2);
    double w;
    if (t > 0.0) {
      const double e = std::exp(-t);
      w = e / (1.0 + e);
    } else {
      w = 1.0 / (1.0 + std::exp(t));
    }
    out.w[i] = w;
    sum += w;
  }
  out.sum = sum;
}

MixtureParams null_point(const Sample& s, double alpha, bool equal_variance) {
  return equal_variance
             ? MixtureParams::equal(alpha, s.mean(), s.mean(), s.sd_n())
             : MixtureParams::unequal(alpha, s.mean(), s.mean(), s.sd_n(), s.sd_n());
}

struct Segment {
  double mean = 0.0;
  double ss = 0.0;  // sum of squared deviations from the segment mean
  std::size_t count = 0;
};

Segment segment_stats(const std::vector<double>& xs, std::size_t lo, std::size_t hi) {
  Segment seg;
  seg.count = hi - lo;
  if (seg.count == 0) return seg;
  double sum = 0.0;
  for (std::size_t i = lo; i < hi; ++i) sum += xs[i];
  seg.mean = sum / static_cast<double>(seg.count);
  double ss = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    const double d = xs[i] - seg.mean;
    ss += d * d;
  }
  seg.ss = ss;
  return seg;
}

// Split start: the m smallest (or largest) observations form component 2,
// the rest component 1; scales come from the penalized closed forms so every
// start already satisfies the penalty's stationarity pattern.
MixtureParams split_start(const Sample& s, const std::vector<double>& sorted, double alpha,
                          std::size_t m, bool low_side, bool equal_variance) {
  const std::size_t n = sorted.size();
  const Segment two = low_side ? segment_stats(sorted, 0, m) : segment_stats(sorted, n - m, n);
  const Segment one = low_side ? segment_stats(sorted, m, n) : segment_stats(sorted, 0, n - m);
  if (equal_variance) {
    const double var =
        (one.ss + two.ss + 2.0 * s.var_n()) / (static_cast<double>(n) + 2.0);
    return MixtureParams::equal(alpha, one.mean, two.mean, std::sqrt(var));
  }
  const double var1 =
      (one.ss + 0.5 * s.var_n()) / (static_cast<double>(one.count) + 0.5);
  const double var2 =
      (two.ss + 0.5 * s.var_n()) / (static_cast<double>(two.count) + 0.5);
  return MixtureParams::unequal(alpha, one.mean, two.mean, std::sqrt(var1), std::sqrt(var2));
}

double pl_of(const Sample& s, const MixtureParams& p, const PenaltySpec& ps) {
  return modified_log_likelihood(s, p, ps);
}

// One frozen-alpha EM pass from a single start, with the monotone safeguard:
// a (floating-point-noise) decrease keeps the previous iterate, so the
// trajectory never descends.
template <bool EqualVar>
double run_inner(const Sample& s, const PenaltySpec& ps, const EMTestConfig& cfg,
                 MixtureParams& p, double pl, Weights& wbuf) {
  const double tol_abs = cfg.inner_tol * static_cast<double>(s.n());
  for (int it = 0; it < cfg.inner_max_iter; ++it) {
    e_step_into(s, p, wbuf);
    const ComponentUpdate u = EqualVar ? m_step_components(s, wbuf, ps, p)
                                       : m_step_components_unequal(s, wbuf, ps, p);
    const MixtureParams q =
        EqualVar ? MixtureParams::equal(p.alpha, u.theta1, u.theta2, u.sigma1)
                 : MixtureParams::unequal(p.alpha, u.theta1, u.theta2, u.sigma1, u.sigma2);
    const double pl_new = pl_of(s, q, ps);
    if (!(pl_new >= pl)) break;
    const double gain = pl_new - pl;
    p = q;
    pl = pl_new;
    if (gain <= tol_abs) break;
  }
  return pl;
}

// At alpha = 1/2 the two component labelings describe the same mixture, so the
// multi-start argmax picks one arbitrarily (tied objective values, rounding
// decides). Later mixing-weight updates are not label-symmetric: the +1 pull
// and the 1/2 clamp act on the second component's mass, so the refined
// statistic would depend on that arbitrary pick. Fix the label by convention:
// the mixing-weight side carries the lighter posterior mass. Posterior masses
// are invariant under affine maps of the data, which keeps the refinement
// affine-equivariant. Near-exact mass ties (symmetric data) order the means.
void canonicalize_half(const Sample& s, MixtureParams& p, Weights& wbuf) {
  if (p.alpha != 0.5) return;
  e_step_into(s, p, wbuf);
  const double half = 0.5 * static_cast<double>(s.n());
  const double tie = 1e-9 * static_cast<double>(s.n());
  const bool swap =
      std::fabs(wbuf.sum - half) <= tie
          ? (p.theta1 > p.theta2 || (p.theta1 == p.theta2 && p.sigma1 > p.sigma2))
          : wbuf.sum > half;
  if (swap) {
    std::swap(p.theta1, p.theta2);
    std::swap(p.sigma1, p.sigma2);
  }
}

template <bool EqualVar>
MixtureParams inner_max_impl(const Sample& s, double alpha_j, const EMTestConfig& cfg) {
  if (!(alpha_j > 0.0 && alpha_j <= 0.5)) {
    throw std::invalid_argument("alpha_j must lie in (0, 0.5]");
  }
  const PenaltySpec ps = EqualVar ? PenaltySpec::equal(s) : PenaltySpec::unequal(s);
  // The null point both guards against degenerate starts and enforces the
  // lower bound pl >= pl(alpha_j, x-bar, x-bar, sd).
  MixtureParams best = null_point(s, alpha_j, EqualVar);
  double best_pl = pl_of(s, best, ps);
  Weights wbuf;
  for (MixtureParams p : multi_start_points(s, alpha_j, cfg, EqualVar)) {
    double pl = pl_of(s, p, ps);
    if (!std::isfinite(pl)) continue;
    pl = run_inner<EqualVar>(s, ps, cfg, p, pl, wbuf);
    if (pl > best_pl) {
      best_pl = pl;
      best = p;
    }
  }
  canonicalize_half(s, best, wbuf);
  return best;
}

template <bool EqualVar>
EMTestResult em_test_impl(const Sample& s, const EMTestConfig& cfg) {
  cfg.validate();
  const PenaltySpec ps = EqualVar ? PenaltySpec::equal(s) : PenaltySpec::unequal(s);
  const NullFit nf = EqualVar ? fit_null(s) : fit_null_unequal(s);

  EMTestResult result;
  result.null_fit = nf;
  Weights wbuf;
  for (double alpha_j : cfg.alphas) {
    MixtureParams p = EqualVar ? inner_maximize_fixed_alpha(s, alpha_j, cfg)
                               : inner_maximize_fixed_alpha_unequal(s, alpha_j, cfg);
    double pl = pl_of(s, p, ps);
    std::vector<double> traj;
    traj.reserve(static_cast<std::size_t>(cfg.iterations));
    traj.push_back(2.0 * (pl - nf.pl0));
    for (int k = 2; k <= cfg.iterations; ++k) {
      e_step_into(s, p, wbuf);
      const double a_new = m_step_alpha(wbuf.sum, s.n());
      const ComponentUpdate u = EqualVar ? m_step_components(s, wbuf, ps, p)
                                         : m_step_components_unequal(s, wbuf, ps, p);
      const MixtureParams q =
          EqualVar ? MixtureParams::equal(a_new, u.theta1, u.theta2, u.sigma1)
                   : MixtureParams::unequal(a_new, u.theta1, u.theta2, u.sigma1, u.sigma2);
      const double pl_new = pl_of(s, q, ps);
      if (pl_new >= pl) {  // monotone safeguard against rounding noise
        p = q;
        pl = pl_new;
      }
      traj.push_back(2.0 * (pl - nf.pl0));
    }
    result.m_trajectory.push_back(std::move(traj));
    result.per_alpha_fits.push_back(p);
  }

  // Max over alpha branches; ties resolve to the smallest index.
  int best = 0;
  for (int j = 1; j < static_cast<int>(cfg.alphas.size()); ++j) {
    if (result.m_trajectory[j].back() > result.m_trajectory[best].back()) best = j;
  }
  result.best_alpha_index = best;
  result.statistic = result.m_trajectory[best].back();
  result.fitted = result.per_alpha_fits[best];

  if (EqualVar) {
    const double d = delta(cfg.alphas);
    result.p_value = cfg.refined_small_alpha
                         ? std::clamp(1.0 - chi1_cdf(result.statistic - d), 0.0, 1.0)
                         : pvalue_equal(result.statistic, d);
  } else {
    result.p_value = pvalue_unequal(result.statistic);
  }
  return result;
}

}  // namespace

void EMTestConfig::validate() const {
  if (alphas.empty()) {
    throw std::invalid_argument("alphas must be nonempty");
  }
  bool has_half = false;
  for (double a : alphas) {
    if (!(a > 0.0 && a <= 0.5)) {
      throw std::invalid_argument("every alpha must lie in (0, 0.5]");
    }
    if (a == 0.5) has_half = true;
  }
  if (!has_half && !refined_small_alpha) {
    throw std::invalid_argument("alphas must contain 0.5");
  }
  if (iterations < 1) throw std::invalid_argument("iteration count K must be >= 1");
  if (!(inner_tol > 0.0)) throw std::invalid_argument("inner_tol must be positive");
  if (inner_max_iter < 1) throw std::invalid_argument("inner_max_iter must be >= 1");
  if (starts < 1) throw std::invalid_argument("starts must be >= 1");
}

NullFit fit_null(const Sample& s) {
  NullFit nf;
  nf.theta0 = s.mean();
  nf.sigma0 = s.sd_n();
  nf.pl0 = modified_log_likelihood(s, MixtureParams::equal(0.5, nf.theta0, nf.theta0, nf.sigma0),
                                   PenaltySpec::equal(s));
  return nf;
}

NullFit fit_null_unequal(const Sample& s) {
  NullFit nf;
  nf.theta0 = s.mean();
  nf.sigma0 = s.sd_n();
  nf.pl0 = modified_log_likelihood(
      s, MixtureParams::unequal(0.5, nf.theta0, nf.theta0, nf.sigma0, nf.sigma0),
      PenaltySpec::unequal(s));
  return nf;
}

Weights e_step(const Sample& sample, const MixtureParams& params) {
  params.validate();
  Weights w;
  e_step_into(sample, params, w);
  return w;
}

double m_step_alpha(double sum_w, std::size_t n) {
  const double nn = static_cast<double>(n);
  if (!(sum_w >= 0.0) || sum_w > nn) {
    throw std::invalid_argument("sum_w must lie in [0, n]");
  }
  return std::min((sum_w + 1.0) / (nn + 1.0), 0.5);
}

ComponentUpdate m_step_components(const Sample& sample, const Weights& weights,
                                  const PenaltySpec& spec, const MixtureParams& previous) {
  spec.validate();
  if (spec.sigma_coefficient != 1.0) {
    throw std::invalid_argument("common-variance update requires penalty coefficient 1");
  }
  const std::vector<double>& xs = sample.values();
  const std::size_t n = xs.size();
  if (weights.w.size() != n) {
    throw std::invalid_argument("weights length does not match the sample");
  }
  double sum2 = 0.0, wx2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum2 += weights.w[i];
    wx2 += weights.w[i] * xs[i];
  }
  double sum1 = 0.0, wx1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = 1.0 - weights.w[i];
    sum1 += v;
    wx1 += v * xs[i];
  }
  const double theta1 = sum1 == 0.0 ? previous.theta1 : wx1 / sum1;
  const double theta2 = sum2 == 0.0 ? previous.theta2 : wx2 / sum2;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d1 = xs[i] - theta1;
    const double d2 = xs[i] - theta2;
    ss += (1.0 - weights.w[i]) * d1 * d1 + weights.w[i] * d2 * d2;
  }
  const double var = (ss + 2.0 * spec.reference_var) / (static_cast<double>(n) + 2.0);
  const double sigma = std::sqrt(var);
  return {theta1, theta2, sigma, sigma};
}

ComponentUpdate m_step_components_unequal(const Sample& sample, const Weights& weights,
                                          const PenaltySpec& spec,
                                          const MixtureParams& previous) {
  spec.validate();
  if (spec.sigma_coefficient != 0.25) {
    throw std::invalid_argument("per-component update requires penalty coefficient 0.25");
  }
  const std::vector<double>& xs = sample.values();
  const std::size_t n = xs.size();
  if (weights.w.size() != n) {
    throw std::invalid_argument("weights length does not match the sample");
  }
  double n2 = 0.0, wx2 = 0.0;
  double n1 = 0.0, wx1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    n2 += weights.w[i];
    wx2 += weights.w[i] * xs[i];
    const double v = 1.0 - weights.w[i];
    n1 += v;
    wx1 += v * xs[i];
  }
  ComponentUpdate u{previous.theta1, previous.theta2, previous.sigma1, previous.sigma2};
  if (n1 > 0.0) {
    u.theta1 = wx1 / n1;
    double ss1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = xs[i] - u.theta1;
      ss1 += (1.0 - weights.w[i]) * d * d;
    }
    u.sigma1 = std::sqrt((ss1 + 0.5 * spec.reference_var) / (n1 + 0.5));
  }
  if (n2 > 0.0) {
    u.theta2 = wx2 / n2;
    double ss2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = xs[i] - u.theta2;
      ss2 += weights.w[i] * d * d;
    }
    u.sigma2 = std::sqrt((ss2 + 0.5 * spec.reference_var) / (n2 + 0.5));
  }
  return u;
}

std::vector<MixtureParams> multi_start_points(const Sample& s, double alpha,
                                              const EMTestConfig& cfg, bool equal_variance) {
  if (!(alpha > 0.0 && alpha <= 0.5)) {
    throw std::invalid_argument("alpha must lie in (0, 0.5]");
  }
  if (cfg.starts < 1) {
    throw std::invalid_argument("starts must be >= 1");
  }
  const std::size_t n = s.n();
  std::vector<double> sorted = s.values();
  std::sort(sorted.begin(), sorted.end());
  const auto m = static_cast<std::size_t>(std::clamp(
      std::llround(alpha * static_cast<double>(n)), 1LL, static_cast<long long>(n) - 1));

  std::vector<MixtureParams> starts;
  starts.reserve(static_cast<std::size_t>(cfg.starts));
  starts.push_back(null_point(s, alpha, equal_variance));
  if (starts.size() < static_cast<std::size_t>(cfg.starts)) {
    starts.push_back(split_start(s, sorted, alpha, m, true, equal_variance));
  }
  if (starts.size() < static_cast<std::size_t>(cfg.starts)) {
    starts.push_back(split_start(s, sorted, alpha, m, false, equal_variance));
  }
  // Jitter pairs are symmetric (+J on the low split, -J on the high split), so
  // the start set maps onto itself under reflection of the data; combined with
  // scale-proportional offsets this keeps the tests affine invariant.
  RandomStream jitter = RandomStream::substream(cfg.start_seed, std::bit_cast<std::uint64_t>(alpha));
  while (starts.size() < static_cast<std::size_t>(cfg.starts)) {
    const double u1 = 2.0 * jitter.next_uniform() - 1.0;
    const double u2 = 2.0 * jitter.next_uniform() - 1.0;
    MixtureParams d = split_start(s, sorted, alpha, m, true, equal_variance);
    d.theta1 += u1 * s.sd_n();
    d.theta2 += u2 * s.sd_n();
    starts.push_back(d);
    if (starts.size() >= static_cast<std::size_t>(cfg.starts)) break;
    MixtureParams e = split_start(s, sorted, alpha, m, false, equal_variance);
    e.theta1 -= u1 * s.sd_n();
    e.theta2 -= u2 * s.sd_n();
    starts.push_back(e);
  }
  return starts;
}

MixtureParams inner_maximize_fixed_alpha(const Sample& sample, double alpha_j,
                                         const EMTestConfig& config) {
  return inner_max_impl<true>(sample, alpha_j, config);
}

MixtureParams inner_maximize_fixed_alpha_unequal(const Sample& sample, double alpha_j,
                                                 const EMTestConfig& config) {
  return inner_max_impl<false>(sample, alpha_j, config);
}

EMTestResult em_test(const Sample& sample, const EMTestConfig& config) {
  return em_test_impl<true>(sample, config);
}

EMTestResult em_test_unequal(const Sample& sample, const EMTestConfig& config) {
  return em_test_impl<false>(sample, config);
}

}  // namespace mixtest
