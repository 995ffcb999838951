// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The asyshrink Authors

#include "asyshrink/sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <json.hpp>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "asyshrink/baselines.hpp"
#include "asyshrink/error.hpp"

namespace asyshrink {

namespace {

constexpr std::array<double, 11> kKnots{0.10, 0.13, 0.15, 0.23, 0.25, 0.40,
                                        0.44, 0.65, 0.76, 0.78, 0.81};

double blocks(double x) {
  constexpr std::array<double, 11> heights{4.0, -5.0, 3.0, -4.0, 5.0, -4.2,
                                           2.1, 4.3,  -3.1, 2.1, -4.2};
  double y = 0.0;
  for (std::size_t j = 0; j < kKnots.size(); ++j) {
    if (x >= kKnots[j]) y += heights[j];
  }
  return y;
}

double bumps(double x) {
  constexpr std::array<double, 11> heights{4.0, 5.0, 3.0, 4.0, 5.0, 4.2,
                                           2.1, 4.3, 3.1, 5.1, 4.2};
  constexpr std::array<double, 11> widths{0.005, 0.005, 0.006, 0.01, 0.01, 0.03,
                                          0.01,  0.01,  0.005, 0.008, 0.005};
  double y = 0.0;
  for (std::size_t j = 0; j < kKnots.size(); ++j) {
    const double u = std::abs((x - kKnots[j]) / widths[j]);
    y += heights[j] / std::pow(1.0 + u, 4.0);
  }
  return y;
}

double sgn(double x) { return static_cast<double>((x > 0.0) - (x < 0.0)); }

double heavisine(double x) {
  return 4.0 * std::sin(4.0 * std::numbers::pi * x) - sgn(x - 0.3) - sgn(0.72 - x);
}

double doppler(double x) {
  constexpr double eps = 0.05;
  return std::sqrt(x * (1.0 - x)) *
         std::sin(2.0 * std::numbers::pi * (1.0 + eps) / (x + eps));
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

void check_dimensions(std::span<const std::vector<double>> estimates,
                      std::span<const double> truth) {
  if (estimates.empty()) throw_invalid("need at least one replication");
  for (std::size_t r = 0; r < estimates.size(); ++r) {
    if (estimates[r].size() != truth.size()) {
      throw_invalid("replication " + std::to_string(r) + " has " +
                    std::to_string(estimates[r].size()) + " points, truth has " +
                    std::to_string(truth.size()));
    }
  }
}

double mse_of(std::span<const double> estimate, std::span<const double> truth) {
  double s = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double e = estimate[i] - truth[i];
    s += e * e;
  }
  return s / static_cast<double>(truth.size());
}

double mae_of(std::span<const double> estimate, std::span<const double> truth) {
  std::vector<double> err(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) err[i] = std::abs(estimate[i] - truth[i]);
  return median(std::move(err));
}

void mean_and_sd(std::span<const double> v, double& mean, double& sd) {
  mean = mean_of(v);
  if (v.size() < 2) {
    sd = 0.0;
    return;
  }
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

TestFunction parse_test_function(const std::string& name) {
  if (name == "bumps") return TestFunction::kBumps;
  if (name == "blocks") return TestFunction::kBlocks;
  if (name == "doppler") return TestFunction::kDoppler;
  if (name == "heavisine") return TestFunction::kHeavisine;
  throw_invalid("unknown test function '" + name +
                "' (expected bumps, blocks, doppler or heavisine)");
}

std::string to_string(TestFunction f) {
  switch (f) {
    case TestFunction::kBumps: return "bumps";
    case TestFunction::kBlocks: return "blocks";
    case TestFunction::kDoppler: return "doppler";
    case TestFunction::kHeavisine: return "heavisine";
  }
  return "unknown";
}

std::vector<double> dj_test_function(TestFunction f, std::size_t n) {
  dyadic_level(n);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i + 1) / static_cast<double>(n);
    switch (f) {
      case TestFunction::kBumps: out[i] = bumps(x); break;
      case TestFunction::kBlocks: out[i] = blocks(x); break;
      case TestFunction::kDoppler: out[i] = doppler(x); break;
      case TestFunction::kHeavisine: out[i] = heavisine(x); break;
    }
  }
  return out;
}

std::vector<double> dj_test_function(const std::string& name, std::size_t n) {
  return dj_test_function(parse_test_function(name), n);
}

double sample_sd(std::span<const double> values) {
  if (values.size() < 2) throw_invalid("standard deviation needs two or more values");
  double mean = 0.0;
  double sd = 0.0;
  mean_and_sd(values, mean, sd);
  return sd;
}

double snr_sigma(std::span<const double> f, double snr) {
  if (!(snr > 0.0 && std::isfinite(snr))) throw_invalid("SNR must be positive");
  const double sd = sample_sd(f);
  if (!(sd > 0.0)) throw_invalid("signal is constant; SNR-based noise level undefined");
  return sd / snr;
}

std::vector<double> rescale_to_sd(std::span<const double> f, double target_sd) {
  const double sd = sample_sd(f);
  if (!(sd > 0.0)) throw_invalid("cannot rescale a constant signal");
  const double mean = mean_of(f);
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = mean + (f[i] - mean) * target_sd / sd;
  return out;
}

Study1Data generate_study1(const MixturePrior& mixture, std::size_t n, double snr,
                           Rng& rng, const WaveletBasis& basis, int j0) {
  validate(mixture);
  const int levels = dyadic_level(n);
  if (j0 < 0 || j0 >= levels) throw_invalid("j0 must satisfy 0 <= j0 < log2(n)");

  WaveletDecomposition truth;
  truth.j0 = j0;
  truth.coarse.assign(std::size_t{1} << j0, 0.0);
  for (int level = j0; level < levels; ++level) {
    std::vector<double> coeffs(std::size_t{1} << level);
    for (double& c : coeffs) c = sample_mixture(mixture, rng);
    truth.details.push_back(std::move(coeffs));
  }

  Study1Data data;
  data.f = idwt(truth, basis);
  data.sigma = snr_sigma(data.f, snr);

  WaveletDecomposition noisy = truth;
  std::normal_distribution<double> normal(0.0, data.sigma);
  for (double& c : noisy.coarse) {
    const double e = normal(rng);
    c += e;
    data.noise.push_back(e);
  }
  for (auto& level : noisy.details) {
    for (double& c : level) {
      const double e = normal(rng);
      c += e;
      data.noise.push_back(e);
    }
  }
  data.y = idwt(noisy, basis);
  data.theta = truth.flatten();
  return data;
}

double amse(std::span<const std::vector<double>> estimates, std::span<const double> truth) {
  check_dimensions(estimates, truth);
  double total = 0.0;
  for (const auto& e : estimates) total += mse_of(e, truth);
  return total / static_cast<double>(estimates.size());
}

double amae(std::span<const std::vector<double>> estimates, std::span<const double> truth) {
  check_dimensions(estimates, truth);
  double total = 0.0;
  for (const auto& e : estimates) total += mae_of(e, truth);
  return total / static_cast<double>(estimates.size());
}

double median(std::vector<double> values) {
  if (values.empty()) throw_invalid("median of an empty vector");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

std::string method_id(Method m) {
  switch (m) {
    case Method::kCV: return "CV";
    case Method::kSURE: return "SURE";
    case Method::kBetaSym: return "BETASYM";
    case Method::kBetaAsym: return "BETAASYM";
    case Method::kKum: return "KUM";
    case Method::kTri: return "TRI";
    case Method::kSN: return "SN";
  }
  return "UNKNOWN";
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods{Method::kCV,       Method::kSURE, Method::kBetaSym,
                                           Method::kBetaAsym, Method::kKum,  Method::kTri,
                                           Method::kSN};
  return methods;
}

Method parse_method(const std::string& id) {
  for (Method m : all_methods()) {
    if (method_id(m) == id) return m;
  }
  throw_invalid("unknown method '" + id +
                "' (valid: CV, SURE, BETASYM, BETAASYM, KUM, TRI, SN)");
}

AsymmetricPrior method_family(Method m) {
  switch (m) {
    case Method::kBetaSym: return BetaPrior{5.0, 5.0, 1.0};
    case Method::kBetaAsym: return BetaPrior{5.0, 1.0, 1.0};
    case Method::kKum: return KumaraswamyPrior{7.0, 2.0, 1.0};
    // The mode is clamped inside (-m(j), m(j)) by the level policy.
    case Method::kTri: return TriangularPrior{8.0, 10.0};
    case Method::kSN: return SkewNormalPrior{8.0, 4.0};
    case Method::kCV:
    case Method::kSURE: break;
  }
  throw_invalid(method_id(m) + " is not a Bayesian shrinkage method");
}

const MethodRow& SimReport::row(Method m) const {
  for (const auto& r : rows) {
    if (r.method == m) return r;
  }
  throw_invalid("report has no row for " + method_id(m));
}

Scenario study1_scenario(int number, std::size_t n, double snr, int replications,
                         std::uint64_t seed, double alpha) {
  Scenario s;
  if (number == 1) {
    s.kind = PriorGenerated{{alpha, BetaPrior{7.0, 1.0, 10.0}}, "study1-weak"};
  } else if (number == 2) {
    s.kind = PriorGenerated{{alpha, BetaPrior{20.0, 1.0, 10.0}}, "study1-strong"};
  } else {
    throw_invalid("study 1 has scenarios 1 and 2 only");
  }
  s.n = n;
  s.snr = snr;
  s.replications = replications;
  s.seed = seed;
  return s;
}

std::uint64_t replication_seed(std::uint64_t seed, std::uint64_t replication) {
  return splitmix64(splitmix64(seed) ^ splitmix64(replication + 0x632be59bd9b4e019ULL));
}

std::vector<double> apply_method(Method method, std::span<const double> y,
                                 const ExperimentOptions& options) {
  const WaveletBasis basis = WaveletBasis::from_name(options.basis);
  switch (method) {
    case Method::kCV: {
      ThresholdPolicy policy;
      policy.kind = ThresholdPolicy::Kind::kCrossValidation;
      return threshold_denoise(y, basis, policy, options.j0).estimate;
    }
    case Method::kSURE: {
      ThresholdPolicy policy;
      policy.kind = ThresholdPolicy::Kind::kSure;
      policy.per_level = true;
      return threshold_denoise(y, basis, policy, options.j0).estimate;
    }
    default: {
      PolicyConfig policy;
      policy.j0 = options.j0;
      policy.beta_exponent = options.beta_exponent;
      return denoise(y, basis, method_family(method), policy, options.quadrature).estimate;
    }
  }
}

SimReport run_experiment(const Scenario& scenario, std::span<const Method> methods,
                         const ExperimentOptions& options) {
  if (scenario.replications < 1) throw_invalid("need at least one replication");
  if (!(scenario.snr > 0.0)) throw_invalid("SNR must be positive");
  if (methods.empty()) throw_invalid("no methods requested");
  dyadic_level(scenario.n);
  const WaveletBasis basis = WaveletBasis::from_name(options.basis);
  if (options.j0 < 0 || options.j0 >= dyadic_level(scenario.n) - 1) {
    throw_invalid("j0 must satisfy 0 <= j0 < log2(n) - 1");
  }

  std::vector<double> fixed_truth;
  if (const auto* tf = std::get_if<TestFunctionScenario>(&scenario.kind)) {
    fixed_truth = rescale_to_sd(dj_test_function(tf->function, scenario.n), tf->function_sd);
  }

  const auto reps = static_cast<std::size_t>(scenario.replications);
  SimReport report;
  report.scenario = scenario;
  report.mse.assign(reps, std::vector<double>(methods.size()));
  report.mae.assign(reps, std::vector<double>(methods.size()));

  auto run_one = [&](std::size_t r) {
    Rng rng(replication_seed(scenario.seed, r));
    std::vector<double> truth;
    std::vector<double> y;
    if (const auto* pg = std::get_if<PriorGenerated>(&scenario.kind)) {
      auto data = generate_study1(pg->mixture, scenario.n, scenario.snr, rng, basis, options.j0);
      truth = std::move(data.f);
      y = std::move(data.y);
    } else {
      truth = fixed_truth;
      const double sigma = snr_sigma(truth, scenario.snr);
      std::normal_distribution<double> normal(0.0, sigma);
      y = truth;
      for (double& v : y) v += normal(rng);
    }
    for (std::size_t k = 0; k < methods.size(); ++k) {
      try {
        const auto estimate = apply_method(methods[k], y, options);
        report.mse[r][k] = mse_of(estimate, truth);
        report.mae[r][k] = mae_of(estimate, truth);
      } catch (const Error& e) {
        throw Error(e.kind(), "replication " + std::to_string(r) + ", method " +
                                  method_id(methods[k]) + ": " + e.what());
      }
    }
  };

  // Warm the shared quadrature caches before fanning out.
  gauss_legendre(options.quadrature.legendre_nodes);

  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(reps)));
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t r = w; r < reps; r += threads) run_one(r);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (std::size_t k = 0; k < methods.size(); ++k) {
    std::vector<double> mse(reps);
    std::vector<double> mae(reps);
    for (std::size_t r = 0; r < reps; ++r) {
      mse[r] = report.mse[r][k];
      mae[r] = report.mae[r][k];
    }
    MethodRow row{methods[k]};
    mean_and_sd(mse, row.amse, row.amse_sd);
    mean_and_sd(mae, row.amae, row.amae_sd);
    report.rows.push_back(row);
  }
  return report;
}

std::string scenario_label(const Scenario& scenario) {
  if (const auto* pg = std::get_if<PriorGenerated>(&scenario.kind)) return pg->label;
  return to_string(std::get<TestFunctionScenario>(scenario.kind).function);
}

void write_json(std::ostream& out, const SimReport& report) {
  using nlohmann::ordered_json;
  const Scenario& s = report.scenario;
  ordered_json scenario;
  scenario["name"] = scenario_label(s);
  if (const auto* pg = std::get_if<PriorGenerated>(&s.kind)) {
    scenario["kind"] = "prior_generated";
    scenario["alpha"] = pg->mixture.alpha;
    scenario["prior"] = describe(pg->mixture.continuous);
  } else {
    const auto& tf = std::get<TestFunctionScenario>(s.kind);
    scenario["kind"] = "test_function";
    scenario["function"] = to_string(tf.function);
    scenario["function_sd"] = tf.function_sd;
  }
  scenario["n"] = s.n;
  scenario["snr"] = s.snr;

  ordered_json doc;
  doc["scenario"] = scenario;
  doc["methods"] = ordered_json::array();
  for (const auto& row : report.rows) {
    doc["methods"].push_back({{"id", method_id(row.method)},
                              {"amse", row.amse},
                              {"amse_sd", row.amse_sd},
                              {"amae", row.amae},
                              {"amae_sd", row.amae_sd}});
  }
  doc["seed"] = s.seed;
  doc["replications"] = s.replications;
  out << doc.dump(2) << '\n';
}

void write_table(std::ostream& out, const SimReport& report) {
  const Scenario& s = report.scenario;
  out << "scenario " << scenario_label(s) << "  n=" << s.n << "  SNR=" << s.snr
      << "  R=" << s.replications << "  seed=" << s.seed << '\n';
  out << std::left << std::setw(10) << "Method" << std::right << std::setw(22)
      << "AMSE (SD)" << std::setw(22) << "AMAE (SD)" << '\n';
  out << std::fixed << std::setprecision(4);
  for (const auto& row : report.rows) {
    std::ostringstream mse;
    std::ostringstream mae;
    mse << std::fixed << std::setprecision(4) << row.amse << " (" << row.amse_sd << ")";
    mae << std::fixed << std::setprecision(4) << row.amae << " (" << row.amae_sd << ")";
    out << std::left << std::setw(10) << method_id(row.method) << std::right << std::setw(22)
        << mse.str() << std::setw(22) << mae.str() << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

void write_replications_csv(std::ostream& out, const SimReport& report) {
  out << "replication,method,mse,mae\n" << std::setprecision(12);
  for (std::size_t r = 0; r < report.mse.size(); ++r) {
    for (std::size_t k = 0; k < report.rows.size(); ++k) {
      out << r << ',' << method_id(report.rows[k].method) << ',' << report.mse[r][k] << ','
          << report.mae[r][k] << '\n';
    }
  }
}

double sign_test_p_value(int wins, int trials) {
  if (trials <= 0 || wins < 0 || wins > trials) throw_invalid("invalid sign test counts");
  const int extreme = std::min(wins, trials - wins);
  // P(X <= extreme) for X ~ Binomial(trials, 1/2), doubled.
  double tail = 0.0;
  for (int k = 0; k <= extreme; ++k) {
    tail += std::exp(std::lgamma(trials + 1.0) - std::lgamma(k + 1.0) -
                     std::lgamma(trials - k + 1.0) - trials * std::numbers::ln2);
  }
  return std::min(1.0, 2.0 * tail);
}

}  // namespace asyshrink
