#include "mixtest/run_record.hpp"

#include <sstream>

#include "json.hpp"

namespace mixtest {

namespace {

using ordered_json = nlohmann::ordered_json;

// Format a double exactly as the JSON serializer would, so the text report
// and the JSON report show identical digits.
std::string fmt_double(double x) { return ordered_json(x).dump(); }

ordered_json params_to_json(const MixtureParams& p) {
  ordered_json j;
  j["alpha"] = p.alpha;
  j["theta1"] = p.theta1;
  j["theta2"] = p.theta2;
  j["sigma1"] = p.sigma1;
  j["sigma2"] = p.sigma2;
  return j;
}

MixtureParams params_from_json(const ordered_json& j, bool equal_variance) {
  if (equal_variance) {
    return MixtureParams::equal(j.at("alpha").get<double>(), j.at("theta1").get<double>(),
                                j.at("theta2").get<double>(), j.at("sigma1").get<double>());
  }
  return MixtureParams::unequal(j.at("alpha").get<double>(), j.at("theta1").get<double>(),
                                j.at("theta2").get<double>(), j.at("sigma1").get<double>(),
                                j.at("sigma2").get<double>());
}

}  // namespace

std::string RunRecord::to_json() const {
  ordered_json j;
  j["command"] = command;
  j["data"]["path"] = data_path;
  j["data"]["column"] = column;
  j["data"]["transform"] = transform;
  j["data"]["n"] = n;
  j["data"]["mean"] = mean;
  j["data"]["var_n"] = var_n;
  j["config"]["variance"] = variance;
  j["config"]["alphas"] = alphas;
  j["config"]["refined_small_alpha"] = refined_small_alpha;
  j["config"]["iterations"] = iterations;
  j["config"]["inner_tol"] = inner_tol;
  j["config"]["inner_max_iter"] = inner_max_iter;
  j["config"]["starts"] = starts;
  j["config"]["seed"] = seed;
  j["result"]["statistic"] = statistic;
  j["result"]["p_value"] = p_value;
  j["result"]["best_alpha_index"] = best_alpha_index;
  j["result"]["m_trajectory"] = m_trajectory;
  j["result"]["fitted"] = params_to_json(fitted);
  j["result"]["null"]["theta"] = null_theta;
  j["result"]["null"]["sigma"] = null_sigma;
  j["result"]["null"]["pl"] = null_pl;
  if (comparator) {
    ordered_json c;
    c["name"] = comparator->name;
    c["statistic"] = comparator->statistic;
    ordered_json pv = ordered_json::object();
    for (const auto& [label, value] : comparator->p_values) pv[label] = value;
    c["p_values"] = pv;
    j["comparator"] = c;
  }
  j["wall_time_s"] = wall_time_s;
  return j.dump(2);
}

RunRecord RunRecord::from_json(const std::string& text) {
  const ordered_json j = ordered_json::parse(text);
  RunRecord r;
  r.command = j.at("command").get<std::string>();
  const auto& d = j.at("data");
  r.data_path = d.at("path").get<std::string>();
  r.column = d.at("column").get<std::string>();
  r.transform = d.at("transform").get<std::string>();
  r.n = d.at("n").get<std::size_t>();
  r.mean = d.at("mean").get<double>();
  r.var_n = d.at("var_n").get<double>();
  const auto& c = j.at("config");
  r.variance = c.at("variance").get<std::string>();
  r.alphas = c.at("alphas").get<std::vector<double>>();
  r.refined_small_alpha = c.at("refined_small_alpha").get<bool>();
  r.iterations = c.at("iterations").get<int>();
  r.inner_tol = c.at("inner_tol").get<double>();
  r.inner_max_iter = c.at("inner_max_iter").get<int>();
  r.starts = c.at("starts").get<int>();
  r.seed = c.at("seed").get<unsigned long long>();
  const auto& res = j.at("result");
  r.statistic = res.at("statistic").get<double>();
  r.p_value = res.at("p_value").get<double>();
  r.best_alpha_index = res.at("best_alpha_index").get<std::size_t>();
  r.m_trajectory = res.at("m_trajectory").get<std::vector<std::vector<double>>>();
  r.fitted = params_from_json(res.at("fitted"), r.variance == "equal");
  r.null_theta = res.at("null").at("theta").get<double>();
  r.null_sigma = res.at("null").at("sigma").get<double>();
  r.null_pl = res.at("null").at("pl").get<double>();
  if (j.contains("comparator")) {
    ComparatorRecord cr;
    const auto& cj = j.at("comparator");
    cr.name = cj.at("name").get<std::string>();
    cr.statistic = cj.at("statistic").get<double>();
    for (const auto& [label, value] : cj.at("p_values").items()) {
      cr.p_values.emplace_back(label, value.get<double>());
    }
    r.comparator = std::move(cr);
  }
  r.wall_time_s = j.at("wall_time_s").get<double>();
  return r;
}

std::string RunRecord::to_text() const {
  std::ostringstream out;
  out << "mixture homogeneity test (" << variance << " variance)\n";
  out << "data: " << data_path;
  if (!column.empty()) out << " column=" << column;
  if (transform != "none") out << " transform=" << transform;
  out << "\n";
  out << "n=" << n << " mean=" << fmt_double(mean) << " var=" << fmt_double(var_n) << "\n";
  out << "alphas:";
  for (double a : alphas) out << " " << fmt_double(a);
  out << "  iterations=" << iterations << "\n";
  out << "statistic: " << fmt_double(statistic) << "\n";
  out << "p-value:   " << fmt_double(p_value) << "\n";
  for (std::size_t j = 0; j < m_trajectory.size(); ++j) {
    out << "trajectory alpha=" << fmt_double(alphas.at(j)) << ":";
    for (double m : m_trajectory[j]) out << " " << fmt_double(m);
    out << "\n";
  }
  out << "best alpha: " << fmt_double(alphas.at(best_alpha_index)) << " (index "
      << best_alpha_index << ")\n";
  out << "fitted: alpha=" << fmt_double(fitted.alpha) << " theta1=" << fmt_double(fitted.theta1)
      << " theta2=" << fmt_double(fitted.theta2) << " sigma1=" << fmt_double(fitted.sigma1)
      << " sigma2=" << fmt_double(fitted.sigma2) << "\n";
  out << "null fit: theta=" << fmt_double(null_theta) << " sigma=" << fmt_double(null_sigma)
      << " penalized loglik=" << fmt_double(null_pl) << "\n";
  if (comparator) {
    out << "comparator (" << comparator->name
        << "): statistic=" << fmt_double(comparator->statistic);
    for (const auto& [label, value] : comparator->p_values) {
      out << " " << label << "=" << fmt_double(value);
    }
    out << "\n";
  }
  out << "wall time: " << fmt_double(wall_time_s) << " s\n";
  return out.str();
}

std::string SimRecord::to_json() const {
  ordered_json j;
  j["command"] = command;
  j["study"] = study;
  j["method"] = method;
  j["model"] = model;
  j["params"] = params;
  j["n"] = n;
  j["reps"] = reps;
  j["seed"] = seed;
  j["critical"] = critical;
  j["crit_reps"] = crit_reps;
  ordered_json rows_json = ordered_json::array();
  for (const auto& row : rows) {
    ordered_json r;
    r["level"] = row[0];
    r["rate"] = row[1];
    r["se"] = row[2];
    rows_json.push_back(r);
  }
  j["rows"] = rows_json;
  j["wall_time_s"] = wall_time_s;
  return j.dump(2);
}

SimRecord SimRecord::from_json(const std::string& text) {
  const ordered_json j = ordered_json::parse(text);
  SimRecord r;
  r.command = j.at("command").get<std::string>();
  r.study = j.at("study").get<std::string>();
  r.method = j.at("method").get<std::string>();
  r.model = j.at("model").get<std::string>();
  r.params = j.at("params").get<std::vector<double>>();
  r.n = j.at("n").get<std::size_t>();
  r.reps = j.at("reps").get<std::size_t>();
  r.seed = j.at("seed").get<unsigned long long>();
  r.critical = j.at("critical").get<std::string>();
  r.crit_reps = j.at("crit_reps").get<std::size_t>();
  for (const auto& row : j.at("rows")) {
    r.rows.push_back({row.at("level").get<double>(), row.at("rate").get<double>(),
                      row.at("se").get<double>()});
  }
  r.wall_time_s = j.at("wall_time_s").get<double>();
  return r;
}

std::string SimRecord::to_text() const {
  std::ostringstream out;
  out << study << " study: method=" << method << " model=" << model << " n=" << n
      << " reps=" << reps << " seed=" << seed << "\n";
  out << "critical values: " << critical;
  if (crit_reps > 0) out << " (" << crit_reps << " null replicates)";
  out << "\n";
  if (!params.empty()) {
    out << "params: 1-alpha=" << fmt_double(params[0]) << " theta1=" << fmt_double(params[1])
        << " theta2=" << fmt_double(params[2]) << " sigma1=" << fmt_double(params[3])
        << " sigma2=" << fmt_double(params[4]) << "\n";
  }
  out << "level      rate        se\n";
  for (const auto& row : rows) {
    out << fmt_double(row[0]) << "  " << fmt_double(row[1]) << "  " << fmt_double(row[2])
        << "\n";
  }
  out << "wall time: " << fmt_double(wall_time_s) << " s\n";
  return out.str();
}

}  // namespace mixtest
