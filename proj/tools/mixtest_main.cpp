#include <charconv>
#include <chrono>
#include <cstdint>
#include <iostream>
#include <span>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mixtest/comparators.hpp"
#include "mixtest/data_io.hpp"
#include "mixtest/em.hpp"
#include "mixtest/limit_dist.hpp"
#include "mixtest/run_record.hpp"
#include "mixtest/simulation.hpp"

namespace {

using namespace mixtest;

std::string join_command(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i > 0) out += ' ';
    const std::string arg = argv[i];
    if (arg.find(' ') != std::string::npos) {
      out += '"';
      out += arg;
      out += '"';
    } else {
      out += arg;
    }
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& flag) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    const std::string token = text.substr(start, end - start);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
      throw std::invalid_argument(flag + ": '" + token + "' is not a number");
    }
    values.push_back(v);
    start = end + 1;
  }
  if (values.empty()) throw std::invalid_argument(flag + " needs at least one value");
  return values;
}

struct TestArgs {
  std::string data;
  std::string column;
  std::string transform = "none";
  std::string variance;
  std::string alphas_text;
  bool refined = false;
  int iterations = 2;
  std::uint64_t seed = 12345;
  double inner_tol = 1e-8;
  int inner_max_iter = 2000;
  int starts = 5;
  bool json = false;
  bool text = false;
  std::string comparator;
};

int run_test(const TestArgs& a, const std::string& command) {
  const bool equal = a.variance == "equal";
  if (!equal && a.variance != "unequal") {
    throw std::invalid_argument("--variance must be 'equal' or 'unequal'");
  }
  if (a.refined && !equal) {
    throw std::invalid_argument(
        "the refined small-alpha preset applies to the equal-variance test only");
  }
  if (!a.comparator.empty() && a.comparator != "mlrt" && a.comparator != "lrt") {
    throw std::invalid_argument("--comparator must be 'mlrt' or 'lrt'");
  }
  if (a.comparator == "lrt" && !equal) {
    throw std::invalid_argument(
        "no unequal-variance likelihood ratio comparator is provided; use --comparator mlrt");
  }

  ReadOptions ro;
  if (!a.column.empty()) ro.column = a.column;
  ro.transform = parse_transform(a.transform);
  const Sample sample = read_data(a.data, ro);

  EMTestConfig cfg;
  if (a.refined) {
    cfg.alphas = {0.01, 0.025, 0.05, 0.1};
    cfg.refined_small_alpha = true;
  } else if (!a.alphas_text.empty()) {
    cfg.alphas = parse_double_list(a.alphas_text, "--alphas");
  }
  cfg.iterations = a.iterations;
  cfg.inner_tol = a.inner_tol;
  cfg.inner_max_iter = a.inner_max_iter;
  cfg.starts = a.starts;
  cfg.start_seed = a.seed;
  cfg.validate();

  const auto start = std::chrono::steady_clock::now();
  const EMTestResult result = equal ? em_test(sample, cfg) : em_test_unequal(sample, cfg);

  RunRecord rec;
  rec.command = command;
  rec.data_path = a.data;
  rec.column = a.column;
  rec.transform = transform_name(ro.transform);
  rec.n = sample.n();
  rec.mean = sample.mean();
  rec.var_n = sample.var_n();
  rec.variance = a.variance;
  rec.alphas = cfg.alphas;
  rec.refined_small_alpha = cfg.refined_small_alpha;
  rec.iterations = cfg.iterations;
  rec.inner_tol = cfg.inner_tol;
  rec.inner_max_iter = cfg.inner_max_iter;
  rec.starts = cfg.starts;
  rec.seed = cfg.start_seed;
  rec.statistic = result.statistic;
  rec.p_value = result.p_value;
  rec.best_alpha_index = static_cast<std::size_t>(result.best_alpha_index);
  rec.m_trajectory = result.m_trajectory;
  rec.fitted = result.fitted;
  rec.null_theta = result.null_fit.theta0;
  rec.null_sigma = result.null_fit.sigma0;
  rec.null_pl = result.null_fit.pl0;

  if (!a.comparator.empty()) {
    ComparatorConfig ccfg;
    ccfg.start_seed = a.seed;
    // The EM fit seeds the comparator search, so the comparator's maximum is
    // at least as high as the EM-test's final iterate allows.
    const std::span<const MixtureParams> extra(&result.fitted, 1);
    ComparatorRecord cr;
    cr.name = a.comparator;
    if (a.comparator == "mlrt" && equal) {
      cr.statistic = mlrt_equal(sample, ccfg, extra);
      cr.p_values.emplace_back("p_chi2_2df", chi_square_sf(cr.statistic, 2));
    } else if (a.comparator == "mlrt") {
      cr.statistic = mlrt_unequal(sample, ccfg, extra);
      // No closed-form reference law; p-values need simulated critical values.
    } else {
      cr.statistic = lrt_equal(sample, ccfg, extra);
      // Annotation only: common chi-square calibrations for the plain LRT.
      cr.p_values.emplace_back("p_chi2_4df", chi_square_sf(cr.statistic, 4));
      cr.p_values.emplace_back("p_chi2_6df", chi_square_sf(cr.statistic, 6));
    }
    rec.comparator = std::move(cr);
  }
  rec.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::cout << (a.json ? rec.to_json() + "\n" : rec.to_text());
  return 0;
}

struct SimArgs {
  std::string method;
  int n = 0;
  int reps = 0;
  std::uint64_t seed = 0;
  std::string model;
  std::string params_text;
  std::string levels_text;
  std::string critical;
  int crit_reps = 20000;
  bool json = false;
  bool text = false;
};

SimRecord make_sim_record(const SimReport& rep, const std::string& command, int crit_reps) {
  SimRecord rec;
  rec.command = command;
  rec.study = rep.study;
  rec.method = method_name(rep.method);
  rec.model = rep.model.name;
  rec.params = {rep.model.one_minus_alpha, rep.model.theta1, rep.model.theta2, rep.model.sigma1,
                rep.model.sigma2};
  rec.n = static_cast<std::size_t>(rep.n);
  rec.reps = static_cast<std::size_t>(rep.reps);
  rec.seed = rep.seed;
  rec.critical = rep.critical_source == CriticalSource::simulated ? "simulated" : "asymptotic";
  rec.crit_reps = rep.critical_source == CriticalSource::simulated
                      ? static_cast<std::size_t>(crit_reps)
                      : 0;
  for (const LevelRate& row : rep.rates) rec.rows.push_back({row.level, row.rate, row.std_error});
  rec.wall_time_s = rep.wall_time_s;
  return rec;
}

int run_type1(const SimArgs& a, const std::string& command) {
  const Method method = parse_method(a.method);
  if (!a.critical.empty() && a.critical != "asymptotic") {
    if (a.critical == "simulated") {
      throw std::invalid_argument(
          "type1 studies use the method's asymptotic law; for simulated critical values run "
          "`simulate power --params 0.5,0,0,1,1 --critical simulated`");
    }
    throw std::invalid_argument("--critical must be 'asymptotic' or 'simulated'");
  }
  std::vector<double> levels{0.10, 0.05, 0.01};
  if (!a.levels_text.empty()) levels = parse_double_list(a.levels_text, "--levels");

  const SimReport rep = type1_study(method, a.n, a.reps, levels, a.seed);
  const SimRecord rec = make_sim_record(rep, command, 0);
  std::cout << (a.json ? rec.to_json() + "\n" : rec.to_text());
  return 0;
}

int run_power(const SimArgs& a, const std::string& command) {
  const Method method = parse_method(a.method);
  if (a.model.empty() && a.params_text.empty()) {
    throw std::invalid_argument("power needs a generating model: pass --model or --params");
  }
  ModelSpec spec = null_model();
  if (!a.model.empty()) {
    spec = lookup_model(a.model);
  } else {
    const std::vector<double> p = parse_double_list(a.params_text, "--params");
    if (p.size() != 5) {
      throw std::invalid_argument(
          "--params needs five values: 1-alpha,theta1,theta2,sigma1,sigma2");
    }
    spec = ModelSpec{"custom", p[0], p[1], p[2], p[3], p[4]};
    spec.validate();
  }
  CriticalSource source = CriticalSource::simulated;
  if (!a.critical.empty()) {
    if (a.critical == "asymptotic") {
      source = CriticalSource::asymptotic;
    } else if (a.critical != "simulated") {
      throw std::invalid_argument("--critical must be 'asymptotic' or 'simulated'");
    }
  }
  std::vector<double> levels{0.10, 0.05, 0.01};
  if (!a.levels_text.empty()) levels = parse_double_list(a.levels_text, "--levels");

  const SimReport rep = power_study(method, spec, a.n, a.reps, levels, source, a.seed,
                                    EMTestConfig{}, a.crit_reps);
  const SimRecord rec = make_sim_record(rep, command, a.crit_reps);
  std::cout << (a.json ? rec.to_json() + "\n" : rec.to_text());
  return 0;
}

void add_output_flags(CLI::App* cmd, bool& json, bool& text) {
  auto* jf = cmd->add_flag("--json", json, "emit a JSON record");
  auto* tf = cmd->add_flag("--text", text, "emit a plain-text report (default)");
  jf->excludes(tf);
  tf->excludes(jf);
}

void add_sim_options(CLI::App* cmd, SimArgs& a) {
  cmd->add_option("--method", a.method,
                  "em-equal | em-unequal | mlrt-equal | mlrt-unequal | lrt-equal")
      ->required();
  cmd->add_option("--n", a.n, "sample size per replicate")->required();
  cmd->add_option("--reps", a.reps, "number of replicates")->required();
  cmd->add_option("--seed", a.seed, "master seed; replicate r uses sub-stream (seed, r)")
      ->required();
  cmd->add_option("--levels", a.levels_text, "comma-separated test levels (default 0.1,0.05,0.01)");
  cmd->add_option("--critical", a.critical, "critical values: asymptotic | simulated");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EM-test of homogeneity for two-component normal mixtures"};
  app.require_subcommand(1);

  TestArgs ta;
  CLI::App* test_cmd = app.add_subcommand("test", "run the homogeneity test on a data file");
  test_cmd->add_option("--data", ta.data, "input file: one value per line or a delimited table")
      ->required();
  test_cmd->add_option("--column", ta.column, "column selector: 1-based index or header name");
  test_cmd->add_option("--transform", ta.transform, "value transform: none | log | sqrt");
  test_cmd->add_option("--variance", ta.variance, "variance regime: equal | unequal")->required();
  auto* alphas_opt = test_cmd->add_option(
      "--alphas", ta.alphas_text, "comma-separated initial mixing proportions (must include 0.5)");
  auto* refined_opt = test_cmd->add_flag(
      "--refined-alphas", ta.refined,
      "small-alpha preset 0.01,0.025,0.05,0.1 with the shifted chi-square(1) p-value");
  refined_opt->excludes(alphas_opt);
  test_cmd->add_option("--K", ta.iterations, "EM iterations per alpha (default 2)");
  test_cmd->add_option("--seed", ta.seed, "seed for the multi-start jitter (default 12345)");
  test_cmd->add_option("--inner-tol", ta.inner_tol,
                       "per-observation tolerance of the inner maximization");
  test_cmd->add_option("--inner-max-iter", ta.inner_max_iter,
                       "iteration cap of the inner maximization");
  test_cmd->add_option("--starts", ta.starts, "multi-start count for the inner maximization");
  test_cmd->add_option("--comparator", ta.comparator, "append a comparator statistic: mlrt | lrt");
  add_output_flags(test_cmd, ta.json, ta.text);

  CLI::App* sim_cmd = app.add_subcommand("simulate", "Monte Carlo type-I-error and power studies");
  sim_cmd->require_subcommand(1);

  SimArgs t1;
  CLI::App* type1_cmd =
      sim_cmd->add_subcommand("type1", "null rejection rates at asymptotic critical values");
  add_sim_options(type1_cmd, t1);
  add_output_flags(type1_cmd, t1.json, t1.text);

  SimArgs pw;
  CLI::App* power_cmd =
      sim_cmd->add_subcommand("power", "rejection rates under a two-component alternative");
  add_sim_options(power_cmd, pw);
  auto* model_opt =
      power_cmd->add_option("--model", pw.model, "registered generating model, I through XII");
  auto* params_opt = power_cmd->add_option(
      "--params", pw.params_text, "custom generating model: 1-alpha,theta1,theta2,sigma1,sigma2");
  model_opt->excludes(params_opt);
  params_opt->excludes(model_opt);
  power_cmd->add_option("--crit-reps", pw.crit_reps,
                        "null replicates for simulated critical values (default 20000)");
  add_output_flags(power_cmd, pw.json, pw.text);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help and friends
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  const std::string command = join_command(argc, argv);
  try {
    if (test_cmd->parsed()) return run_test(ta, command);
    if (type1_cmd->parsed()) return run_type1(t1, command);
    return run_power(pw, command);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
