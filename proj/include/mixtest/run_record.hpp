#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mixtest/em.hpp"

namespace mixtest {

// Serializable record of one `test` invocation: the input summary, the
// configuration, and the fitted results.  Round-trips through JSON losslessly.
struct ComparatorRecord {
  std::string name;  // "mlrt" or "lrt"
  double statistic = 0.0;
  // (label, value) pairs, e.g. {"p_chi2_2df", 0.012}; empty when no
  // closed-form reference law applies.
  std::vector<std::pair<std::string, double>> p_values;

  bool operator==(const ComparatorRecord&) const = default;
};

struct RunRecord {
  std::string command;

  std::string data_path;
  std::string column;  // empty when no selector was given
  std::string transform = "none";
  std::size_t n = 0;
  double mean = 0.0;
  double var_n = 0.0;

  std::string variance;  // "equal" or "unequal"
  std::vector<double> alphas;
  bool refined_small_alpha = false;
  int iterations = 0;
  double inner_tol = 0.0;
  int inner_max_iter = 0;
  int starts = 0;
  unsigned long long seed = 0;

  double statistic = 0.0;
  double p_value = 0.0;
  std::size_t best_alpha_index = 0;
  std::vector<std::vector<double>> m_trajectory;  // one row per alpha, K entries each
  MixtureParams fitted = MixtureParams::equal(0.5, 0.0, 0.0, 1.0);
  double null_theta = 0.0;
  double null_sigma = 0.0;
  double null_pl = 0.0;

  std::optional<ComparatorRecord> comparator;

  double wall_time_s = 0.0;

  bool operator==(const RunRecord&) const = default;

  std::string to_json() const;
  static RunRecord from_json(const std::string& text);
  std::string to_text() const;
};

// Serializable record of one `simulate` invocation.
struct SimRecord {
  std::string command;
  std::string study;  // "type1" or "power"
  std::string method;
  std::string model;  // model name, or "custom" with params below, or "null"
  std::vector<double> params;  // {1-alpha, theta1, theta2, sigma1, sigma2}
  std::size_t n = 0;
  std::size_t reps = 0;
  unsigned long long seed = 0;
  std::string critical;  // "asymptotic" or "simulated"
  std::size_t crit_reps = 0;  // 0 when asymptotic
  // (level, rate, standard error) rows.
  std::vector<std::array<double, 3>> rows;
  double wall_time_s = 0.0;

  bool operator==(const SimRecord&) const = default;

  std::string to_json() const;
  static SimRecord from_json(const std::string& text);
  std::string to_text() const;
};

}  // namespace mixtest
