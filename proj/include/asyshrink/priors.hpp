// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The asyshrink Authors

#pragma once

#include <random>
#include <string>
#include <variant>
#include <vector>

namespace asyshrink {

using Rng = std::mt19937_64;

/// Beta law with shapes (a, b) stretched onto (-m, m).
struct BetaPrior {
  double a;
  double b;
  double m;
};

/// Kumaraswamy law with shapes (a, b) stretched onto (-m, m).
struct KumaraswamyPrior {
  double a;
  double b;
  double m;
};

/// Triangular law on (-m, m) peaking at `mode`.
struct TriangularPrior {
  double mode;
  double m;
};

/// Skew normal with scale tau and skewness gamma, centred at zero.
struct SkewNormalPrior {
  double tau;
  double gamma;
};

/// Continuous component of the mixture prior. The beta and triangular
/// members are usually stated with a != b and mode != 0; the symmetric
/// settings are accepted because the densities remain well defined.
using AsymmetricPrior =
    std::variant<BetaPrior, KumaraswamyPrior, TriangularPrior, SkewNormalPrior>;

/// alpha * (point mass at 0) + (1 - alpha) * continuous.
struct MixturePrior {
  double alpha;
  AsymmetricPrior continuous;
};

/// Throws Error(kInvalidArgument) when a hyperparameter is out of range.
void validate(const AsymmetricPrior& prior);
void validate(const MixturePrior& prior);

std::string describe(const AsymmetricPrior& prior);

/// Family keyword: "beta", "kumaraswamy", "triangular" or "skewnormal".
std::string family_name(const AsymmetricPrior& prior);

bool is_bounded(const AsymmetricPrior& prior);

/// m for the bounded members, +infinity for the skew normal.
double half_support(const AsymmetricPrior& prior);

/// Points inside the support where the density is not smooth.
std::vector<double> kinks(const AsymmetricPrior& prior);

/// Copy of `prior` with its support rescaled to (-m, m). A triangular mode
/// that would fall outside the new support is clamped just inside it. The
/// skew normal is returned unchanged.
AsymmetricPrior with_half_support(const AsymmetricPrior& prior, double m);

/// Density evaluator with normalizing constants precomputed.
class PriorDensity {
 public:
  explicit PriorDensity(const AsymmetricPrior& prior);

  /// log g(theta); -infinity outside the support.
  double log_pdf(double theta) const;
  double pdf(double theta) const;

  const AsymmetricPrior& prior() const { return prior_; }

 private:
  AsymmetricPrior prior_;
  double log_norm_ = 0.0;
};

double pdf(const AsymmetricPrior& prior, double theta);
double log_pdf(const AsymmetricPrior& prior, double theta);
double cdf(const AsymmetricPrior& prior, double theta);

/// Exact draws: gamma ratio (beta), inverse CDF (Kumaraswamy, triangular),
/// two-normal representation (skew normal). Bounded draws lie strictly
/// inside (-m, m).
double sample(const AsymmetricPrior& prior, Rng& rng);

/// Exactly 0.0 with probability alpha, otherwise a draw of the continuous part.
double sample_mixture(const MixturePrior& prior, Rng& rng);

/// Uniform draw on the open interval (0, 1).
double open_uniform(Rng& rng);

// Standard normal helpers shared by the numerical modules.
double normal_pdf(double z);
double normal_cdf(double z);
/// log Phi(z), accurate far into the lower tail.
double log_normal_cdf(double z);

}  // namespace asyshrink
