// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The asyshrink Authors

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "asyshrink/priors.hpp"
#include "asyshrink/shrinkage.hpp"
#include "asyshrink/wavelet.hpp"

namespace asyshrink {

enum class TestFunction { kBumps, kBlocks, kDoppler, kHeavisine };

TestFunction parse_test_function(const std::string& name);
std::string to_string(TestFunction f);

/// Donoho-Johnstone test function sampled at x_i = i/n, i = 1..n, in its
/// original (unscaled) closed form. Blocks uses right-continuous steps.
std::vector<double> dj_test_function(TestFunction f, std::size_t n);
std::vector<double> dj_test_function(const std::string& name, std::size_t n);

/// Sample standard deviation (n - 1 denominator).
double sample_sd(std::span<const double> values);

/// sd(f) / snr. Throws for a constant signal or non-positive snr.
double snr_sigma(std::span<const double> f, double snr);

/// Affinely rescales `f` about its mean so that sample_sd(f) == target_sd.
std::vector<double> rescale_to_sd(std::span<const double> f, double target_sd);

struct Study1Data {
  std::vector<double> f;      // idwt(theta)
  std::vector<double> y;      // idwt(theta + eps)
  std::vector<double> theta;  // flattened true coefficients
  std::vector<double> noise;  // flattened wavelet-domain noise eps
  double sigma = 0.0;
};

/// Draws theta for every detail coefficient of levels j0..J-1 from the
/// mixture (coarse block zero), sets sigma = sd(f)/snr and adds
/// N(0, sigma^2) noise in the wavelet domain.
Study1Data generate_study1(const MixturePrior& mixture, std::size_t n, double snr,
                           Rng& rng, const WaveletBasis& basis, int j0);

/// (1 / Rn) sum_r sum_i (estimate_r[i] - truth[i])^2.
double amse(std::span<const std::vector<double>> estimates, std::span<const double> truth);

/// (1 / R) sum_r median_i |estimate_r[i] - truth[i]|.
double amae(std::span<const std::vector<double>> estimates, std::span<const double> truth);

/// Median, averaging the central pair for even lengths.
double median(std::vector<double> values);

enum class Method { kCV, kSURE, kBetaSym, kBetaAsym, kKum, kTri, kSN };

/// "CV", "SURE", "BETASYM", "BETAASYM", "KUM", "TRI", "SN".
std::string method_id(Method m);
Method parse_method(const std::string& id);
const std::vector<Method>& all_methods();

/// Continuous component used by a Bayesian method; m is a placeholder that
/// the level policy replaces. Throws for CV and SURE.
AsymmetricPrior method_family(Method m);

struct PriorGenerated {
  MixturePrior mixture;
  std::string label;
};
struct TestFunctionScenario {
  TestFunction function;
  /// The function is rescaled to this sample standard deviation.
  double function_sd = 7.0;
};

struct Scenario {
  std::variant<PriorGenerated, TestFunctionScenario> kind;
  std::size_t n = 512;
  double snr = 3.0;
  int replications = 200;
  std::uint64_t seed = 1;
};

// Point-mass weight of the study 1 generating mixture.
inline constexpr double kStudy1Alpha = 0.94;

/// Study 1 scenarios: 1 draws from Beta(7,1,10), 2 from Beta(20,1,10).
/// `alpha` is the point-mass weight used to generate coefficients.
Scenario study1_scenario(int number, std::size_t n, double snr, int replications,
                         std::uint64_t seed, double alpha = kStudy1Alpha);

struct ExperimentOptions {
  std::string basis = "db10";
  int j0 = 3;
  double beta_exponent = 2.0;
  QuadratureConfig quadrature{};
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

struct MethodRow {
  Method method;
  double amse = 0.0;
  double amse_sd = 0.0;
  double amae = 0.0;
  double amae_sd = 0.0;
};

struct SimReport {
  Scenario scenario;
  std::vector<MethodRow> rows;
  /// mse[r][k], mae[r][k]: replication r, method rows[k].method.
  std::vector<std::vector<double>> mse;
  std::vector<std::vector<double>> mae;

  const MethodRow& row(Method m) const;
};

/// Seed of replication r, a fixed function of (seed, r).
std::uint64_t replication_seed(std::uint64_t seed, std::uint64_t replication);

/// Runs every method on the same noisy data in each replication.
/// Replications run concurrently; results are reduced in replication order,
/// so the report does not depend on the thread count.
SimReport run_experiment(const Scenario& scenario, std::span<const Method> methods,
                         const ExperimentOptions& options = {});

/// Estimate of one method on one noisy series.
std::vector<double> apply_method(Method method, std::span<const double> y,
                                 const ExperimentOptions& options);

std::string scenario_label(const Scenario& scenario);

void write_json(std::ostream& out, const SimReport& report);
void write_table(std::ostream& out, const SimReport& report);
/// replication,method,mse,mae
void write_replications_csv(std::ostream& out, const SimReport& report);

/// Two-sided exact sign-test p-value for `wins` successes in `trials`.
double sign_test_p_value(int wins, int trials);

}  // namespace asyshrink
