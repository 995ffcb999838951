// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The asyshrink Authors

#include "asyshrink/cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "asyshrink/error.hpp"
#include "asyshrink/risk.hpp"
#include "asyshrink/shrinkage.hpp"
#include "asyshrink/sim.hpp"

namespace asyshrink::cli {

namespace {

struct PriorFlags {
  std::string family = "beta";
  std::optional<double> a;
  std::optional<double> b;
  double m = 3.0;
  std::optional<double> tau;
  std::optional<double> gamma;
};

void add_prior_flags(CLI::App* cmd, PriorFlags& flags, bool with_m) {
  cmd->add_option("--prior", flags.family,
                  "Continuous prior component: beta, kumaraswamy, triangular, skewnormal")
      ->capture_default_str();
  cmd->add_option("--a", flags.a, "Shape a (beta, kumaraswamy) or mode (triangular)");
  cmd->add_option("--b", flags.b, "Shape b (beta, kumaraswamy)");
  if (with_m) {
    cmd->add_option("--m", flags.m, "Half-support of bounded priors")->capture_default_str();
  }
  cmd->add_option("--tau", flags.tau, "Skew normal scale");
  cmd->add_option("--gamma", flags.gamma, "Skew normal skewness");
}

// Family defaults follow the hyperparameters used in the simulation studies.
AsymmetricPrior build_prior(const PriorFlags& f, double m) {
  if (f.family == "beta") return BetaPrior{f.a.value_or(5.0), f.b.value_or(1.0), m};
  if (f.family == "kumaraswamy" || f.family == "kum") {
    return KumaraswamyPrior{f.a.value_or(7.0), f.b.value_or(2.0), m};
  }
  if (f.family == "triangular" || f.family == "tri") {
    return TriangularPrior{f.a.value_or(8.0), m};
  }
  if (f.family == "skewnormal" || f.family == "sn") {
    return SkewNormalPrior{f.tau.value_or(8.0), f.gamma.value_or(4.0)};
  }
  throw_invalid("unknown prior '" + f.family +
                "' (expected beta, kumaraswamy, triangular or skewnormal)");
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path != "-") {
      file_.open(path);
      if (!file_) throw_invalid("cannot open output file '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\"");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\"");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_double(const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) return std::nullopt;
  return value;
}

struct DenoiseFlags {
  std::string input;
  std::string output = "-";
  PriorFlags prior;
  double beta_exponent = 2.0;
  std::string basis = "db10";
  int j0 = 3;
  bool pad = false;
  std::optional<double> sigma;
  int column = 1;
};

int cmd_denoise(const DenoiseFlags& f, std::ostream& out, std::ostream& err) {
  const WaveletBasis basis = WaveletBasis::from_name(f.basis);
  // Support is reset per level; the template only needs to be valid.
  const double template_m = 2.0 * std::max(1.0, std::abs(f.prior.a.value_or(8.0)));
  const AsymmetricPrior family = build_prior(f.prior, template_m);
  validate(family);
  if (!(f.beta_exponent > 0.0)) throw_invalid("--alpha-beta-exponent must be positive");
  if (f.sigma && !(*f.sigma > 0.0)) throw_invalid("--sigma must be positive");

  std::ifstream in(f.input);
  if (!in) throw_invalid("cannot open input file '" + f.input + "'");
  std::vector<double> series = read_series_csv(in, f.column);
  const std::size_t original = series.size();
  if (!is_power_of_two(original)) {
    if (!f.pad) {
      throw_invalid("input has " + std::to_string(original) +
                    " rows, not a power of two (use --pad)");
    }
    series = reflect_pad(series);
  }
  if (f.j0 < 0 || f.j0 >= dyadic_level(series.size())) {
    throw_invalid("--j0 must satisfy 0 <= j0 < log2(n)");
  }

  PolicyConfig policy;
  policy.j0 = f.j0;
  policy.beta_exponent = f.beta_exponent;
  policy.fixed_sigma = f.sigma;
  DenoiseResult result = denoise(series, basis, family, policy);
  result.estimate.resize(original);

  Output sink(f.output, out);
  sink.stream() << "denoised\n" << std::setprecision(15);
  for (double v : result.estimate) sink.stream() << v << '\n';

  std::ostream& report = f.output == "-" ? err : out;
  const double snr = original > 1 ? sample_sd(result.estimate) / result.sigma : 0.0;
  report << "sigma_hat " << std::setprecision(8) << result.sigma << '\n';
  report << "estimated_snr " << snr << '\n';
  return kSuccess;
}

struct SimulateFlags {
  std::string scenario;
  std::string function;
  std::size_t n = 512;
  double snr = 3.0;
  int replications = 200;
  std::uint64_t seed = 1;
  std::string methods;
  std::string format = "json";
  std::string output = "-";
  std::string csv;
  std::string basis = "db10";
  int j0 = 3;
  unsigned threads = 0;
  double alpha = kStudy1Alpha;
  double function_sd = 7.0;
};

std::vector<Method> parse_methods(const std::string& list) {
  if (list.empty()) return all_methods();
  std::vector<Method> methods;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) methods.push_back(parse_method(item));
  }
  if (methods.empty()) throw_invalid("--methods is empty (valid: CV, SURE, BETASYM, BETAASYM, KUM, TRI, SN)");
  return methods;
}

int cmd_simulate(const SimulateFlags& f, std::ostream& out) {
  if (f.scenario.empty() == f.function.empty()) {
    throw_invalid("give exactly one of --scenario or --function");
  }
  if (f.format != "json" && f.format != "table") {
    throw_invalid("--format must be json or table");
  }
  const auto methods = parse_methods(f.methods);
  WaveletBasis::from_name(f.basis);

  Scenario scenario;
  if (!f.scenario.empty()) {
    int number = 0;
    if (f.scenario == "study1-weak" || f.scenario == "1") number = 1;
    if (f.scenario == "study1-strong" || f.scenario == "2") number = 2;
    if (number == 0) {
      throw_invalid("unknown --scenario '" + f.scenario +
                    "' (expected study1-weak or study1-strong)");
    }
    scenario = study1_scenario(number, f.n, f.snr, f.replications, f.seed, f.alpha);
  } else {
    scenario.kind = TestFunctionScenario{parse_test_function(f.function), f.function_sd};
    scenario.n = f.n;
    scenario.snr = f.snr;
    scenario.replications = f.replications;
    scenario.seed = f.seed;
  }

  ExperimentOptions options;
  options.basis = f.basis;
  options.j0 = f.j0;
  options.threads = f.threads;
  const SimReport report = run_experiment(scenario, methods, options);

  Output sink(f.output, out);
  if (f.format == "json") {
    write_json(sink.stream(), report);
  } else {
    write_table(sink.stream(), report);
  }
  if (!f.csv.empty()) {
    Output raw(f.csv, out);
    write_replications_csv(raw.stream(), report);
  }
  return kSuccess;
}

struct RiskgridFlags {
  PriorFlags prior;
  double alpha = 0.9;
  double sigma = 1.0;
  double theta_min = -6.0;
  double theta_max = 6.0;
  int points = 121;
  std::string output = "-";
};

int cmd_riskgrid(const RiskgridFlags& f, std::ostream& out) {
  PriorFlags prior = f.prior;
  // Defaults reproduce the left-skewed beta rule with a = 7, b = 1, m = 3.
  if (prior.family == "beta") {
    if (!prior.a) prior.a = 7.0;
    if (!prior.b) prior.b = 1.0;
  }
  const MixturePrior mixture{f.alpha, build_prior(prior, f.prior.m)};
  const auto thetas = linspace(f.theta_min, f.theta_max, f.points);
  const ShrinkageRule rule(mixture, f.sigma);
  const RiskGrid grid =
      risk_grid([&rule](double d) { return rule.shrink(d); }, f.sigma, thetas);
  Output sink(f.output, out);
  write_csv(sink.stream(), grid);
  return kSuccess;
}

}  // namespace

std::vector<double> read_series_csv(std::istream& in, int column) {
  if (column < 1) throw_invalid("CSV column index is 1-based");
  std::vector<double> values;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    std::stringstream fields(line);
    std::string field;
    for (int c = 0; c < column; ++c) {
      if (!std::getline(fields, field, ',')) {
        throw_invalid("row " + std::to_string(row) + " has fewer than " +
                      std::to_string(column) + " columns");
      }
    }
    const std::string text = trim(field);
    const auto value = parse_double(text);
    if (!value) {
      if (row == 1) continue;  // header
      throw_invalid("row " + std::to_string(row) + ": '" + text + "' is not a number");
    }
    values.push_back(*value);
  }
  if (values.empty()) throw_invalid("input contains no numeric rows");
  return values;
}

std::vector<double> reflect_pad(const std::vector<double>& x) {
  if (x.empty()) throw_invalid("cannot pad an empty series");
  std::size_t target = 1;
  while (target < x.size()) target <<= 1;
  std::vector<double> out = x;
  for (std::size_t k = 0; out.size() < target; ++k) out.push_back(x[x.size() - 1 - k]);
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian wavelet shrinkage under asymmetric mixture priors"};
  app.require_subcommand(1);

  DenoiseFlags denoise_flags;
  auto* denoise_cmd = app.add_subcommand("denoise", "Denoise a CSV series");
  denoise_cmd->add_option("--input", denoise_flags.input, "Input CSV")->required();
  denoise_cmd->add_option("--output", denoise_flags.output, "Output CSV ('-' for stdout)")
      ->capture_default_str();
  add_prior_flags(denoise_cmd, denoise_flags.prior, false);
  denoise_cmd->add_option("--alpha-beta-exponent", denoise_flags.beta_exponent,
                          "Exponent of the level-dependent mixture weight")
      ->capture_default_str();
  denoise_cmd->add_option("--basis", denoise_flags.basis, "Wavelet basis (db1..db10)")
      ->capture_default_str();
  denoise_cmd->add_option("--j0", denoise_flags.j0, "Primary resolution level")
      ->capture_default_str();
  denoise_cmd->add_flag("--pad", denoise_flags.pad,
                        "Reflect-pad non-dyadic input to the next power of two");
  denoise_cmd->add_option("--sigma", denoise_flags.sigma,
                          "Known noise level (default: finest-level MAD estimate)");
  denoise_cmd->add_option("--column", denoise_flags.column, "1-based CSV column")
      ->capture_default_str();

  SimulateFlags sim_flags;
  auto* sim_cmd = app.add_subcommand("simulate", "Run a Monte Carlo simulation study");
  sim_cmd->add_option("--scenario", sim_flags.scenario, "study1-weak or study1-strong");
  sim_cmd->add_option("--function", sim_flags.function,
                      "Test function: bumps, blocks, doppler, heavisine");
  sim_cmd->add_option("--n", sim_flags.n, "Sample size (power of two)")->capture_default_str();
  sim_cmd->add_option("--snr", sim_flags.snr, "Signal-to-noise ratio sd(f)/sigma")
      ->capture_default_str();
  sim_cmd->add_option("--replications", sim_flags.replications, "Monte Carlo replications")
      ->capture_default_str();
  sim_cmd->add_option("--seed", sim_flags.seed, "Master seed")->capture_default_str();
  sim_cmd->add_option("--methods", sim_flags.methods,
                      "Comma-separated subset of CV,SURE,BETASYM,BETAASYM,KUM,TRI,SN");
  sim_cmd->add_option("--format", sim_flags.format, "json or table")->capture_default_str();
  sim_cmd->add_option("--output", sim_flags.output, "Report path ('-' for stdout)")
      ->capture_default_str();
  sim_cmd->add_option("--csv", sim_flags.csv, "Per-replication metrics CSV");
  sim_cmd->add_option("--basis", sim_flags.basis, "Wavelet basis")->capture_default_str();
  sim_cmd->add_option("--j0", sim_flags.j0, "Primary resolution level")->capture_default_str();
  sim_cmd->add_option("--threads", sim_flags.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
  sim_cmd->add_option("--alpha", sim_flags.alpha,
                      "Point-mass weight used to generate study 1 coefficients")
      ->capture_default_str();
  sim_cmd->add_option("--function-sd", sim_flags.function_sd,
                      "Standard deviation the test function is rescaled to")
      ->capture_default_str();

  RiskgridFlags risk_flags;
  auto* risk_cmd = app.add_subcommand("riskgrid", "Tabulate rule, bias, variance and risk");
  add_prior_flags(risk_cmd, risk_flags.prior, true);
  risk_cmd->add_option("--alpha", risk_flags.alpha, "Mixture weight")->capture_default_str();
  risk_cmd->add_option("--sigma", risk_flags.sigma, "Noise level")->capture_default_str();
  risk_cmd->add_option("--theta-min", risk_flags.theta_min)->capture_default_str();
  risk_cmd->add_option("--theta-max", risk_flags.theta_max)->capture_default_str();
  risk_cmd->add_option("--points", risk_flags.points)->capture_default_str();
  risk_cmd->add_option("--output", risk_flags.output, "Output CSV ('-' for stdout)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (denoise_cmd->parsed()) return cmd_denoise(denoise_flags, out, err);
    if (sim_cmd->parsed()) return cmd_simulate(sim_flags, out);
    if (risk_cmd->parsed()) return cmd_riskgrid(risk_flags, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::kInvalidArgument ? kUsageError : kComputationError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kComputationError;
  }
  return kUsageError;
}

}  // namespace asyshrink::cli
