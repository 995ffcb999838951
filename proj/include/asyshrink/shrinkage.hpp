// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The asyshrink Authors

#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "asyshrink/priors.hpp"
#include "asyshrink/quadrature.hpp"
#include "asyshrink/wavelet.hpp"

namespace asyshrink {

struct QuadratureConfig {
  /// Gauss-Legendre nodes per sub-interval for the bounded priors.
  int legendre_nodes = 128;
  /// Half-width, in noise standard deviations, of the sub-interval centred
  /// at the observation. The likelihood is resolved there even when sigma is
  /// small compared with the prior support.
  double likelihood_window = 12.0;
};

/// Posterior-mean shrinkage rule E(theta | d) for d = theta + N(0, sigma^2)
/// and the mixture prior alpha * delta_0 + (1 - alpha) * g.
///
/// Bounded priors are integrated in theta over (-m, m) with composite
/// Gauss-Legendre, split at density kinks and around d. The skew normal is
/// conjugate to the Gaussian likelihood and is evaluated in closed form.
/// Both paths work on the log scale so that phi(d / sigma) may underflow
/// without harm.
class ShrinkageRule {
 public:
  ShrinkageRule(MixturePrior prior, double sigma, QuadratureConfig config = {});

  double shrink(double d) const;
  double operator()(double d) const { return shrink(d); }

  const MixturePrior& prior() const { return prior_; }
  double sigma() const { return sigma_; }
  const QuadratureConfig& config() const { return config_; }

 private:
  double shrink_bounded(double d) const;
  double shrink_unbounded(double d) const;
  [[noreturn]] void fail(double d) const;

  MixturePrior prior_;
  double sigma_;
  QuadratureConfig config_;
  PriorDensity density_;
  std::shared_ptr<const QuadratureRule> legendre_;
};

/// Mixture weight for detail level j: 1 - (j - j0 + 1)^(-beta).
/// Requires j > j0 and beta > 0.
double alpha_policy(int level, int j0, double beta_exponent);

/// Largest absolute coefficient of a level. Zero means the level is
/// degenerate and shrinkage is skipped.
double m_policy(std::span<const double> level_coeffs);

/// median(|d|) / 0.6745 over the finest detail level.
double estimate_sigma(std::span<const double> finest_details);

struct PolicyConfig {
  double beta_exponent = 2.0;
  int j0 = 3;
  /// Noise level to use instead of the finest-level MAD estimate.
  std::optional<double> fixed_sigma;
};

/// Shrinks the detail coefficients of `decomp` in place. Levels j > j0 use
/// alpha_policy/m_policy with `family` rescaled to (-m(j), m(j)); the level
/// j0 details and the coarse block pass through unchanged.
void shrink_levels(WaveletDecomposition& decomp, const AsymmetricPrior& family,
                   const PolicyConfig& policy, double sigma,
                   const QuadratureConfig& config = {});

struct DenoiseResult {
  std::vector<double> estimate;
  double sigma = 0.0;
  WaveletDecomposition shrunk;
};

/// dwt -> level-wise Bayesian shrinkage -> idwt.
DenoiseResult denoise(std::span<const double> signal, const WaveletBasis& basis,
                      const AsymmetricPrior& family, const PolicyConfig& policy,
                      const QuadratureConfig& config = {});

}  // namespace asyshrink
