// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The asyshrink Authors

#include "asyshrink/shrinkage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "asyshrink/error.hpp"

namespace asyshrink {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Streaming accumulator for sum_i exp(e_i) * {1, x_i} with a running
// max-exponent shift.
struct ScaledSums {
  double shift = kNegInf;
  double mass = 0.0;
  double moment = 0.0;

  void add(double log_weight, double x) {
    if (log_weight == kNegInf) return;
    if (log_weight > shift) {
      const double rescale = shift == kNegInf ? 0.0 : std::exp(shift - log_weight);
      mass *= rescale;
      moment *= rescale;
      shift = log_weight;
    }
    const double w = std::exp(log_weight - shift);
    mass += w;
    moment += w * x;
  }
};

// Posterior mean from the point-mass log weight and the continuous sums.
double combine(double log_point_mass, double log_one_minus_alpha,
               const ScaledSums& sums) {
  if (sums.shift == kNegInf) return 0.0;
  const double log_cont = log_one_minus_alpha + sums.shift;
  const double shift = std::max(log_point_mass, log_cont);
  const double cont = std::exp(log_cont - shift);
  const double point = std::exp(log_point_mass - shift);
  return cont * sums.moment / (point + cont * sums.mass);
}

}  // namespace

ShrinkageRule::ShrinkageRule(MixturePrior prior, double sigma,
                             QuadratureConfig config)
    : prior_(std::move(prior)),
      sigma_(sigma),
      config_(config),
      density_(prior_.continuous) {
  validate(prior_);
  if (!(std::isfinite(sigma_) && sigma_ > 0.0)) {
    std::ostringstream os;
    os << "noise level sigma must be positive, got " << sigma_;
    throw_invalid(os.str());
  }
  if (config_.legendre_nodes < 32) {
    throw_invalid("shrinkage quadrature needs at least 32 nodes");
  }
  if (!(config_.likelihood_window > 0.0)) {
    throw_invalid("likelihood window must be positive");
  }
  legendre_ = gauss_legendre(config_.legendre_nodes);
}

double ShrinkageRule::shrink(double d) const {
  if (!std::isfinite(d)) throw_invalid("cannot shrink a non-finite coefficient");
  const double value =
      is_bounded(prior_.continuous) ? shrink_bounded(d) : shrink_unbounded(d);
  if (!std::isfinite(value)) fail(d);
  return value;
}

void ShrinkageRule::fail(double d) const {
  std::ostringstream os;
  os << "posterior mean is not finite at d=" << d << " for prior alpha="
     << prior_.alpha << ", " << describe(prior_.continuous) << ", sigma=" << sigma_;
  throw_computation(os.str());
}

double ShrinkageRule::shrink_bounded(double d) const {
  const double m = half_support(prior_.continuous);
  double cuts[6];
  int count = 0;
  cuts[count++] = -m;
  cuts[count++] = m;
  for (double k : kinks(prior_.continuous)) cuts[count++] = k;
  const double reach = config_.likelihood_window * sigma_;
  for (double c : {d - reach, d + reach}) {
    if (c > -m && c < m) cuts[count++] = c;
  }
  std::sort(cuts, cuts + count);

  const QuadratureRule& rule = *legendre_;
  ScaledSums sums;
  for (int piece = 0; piece + 1 < count; ++piece) {
    const double lo = cuts[piece];
    const double hi = cuts[piece + 1];
    if (!(hi > lo)) continue;
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double theta = mid + half * rule.nodes[i];
      const double z = (d - theta) / sigma_;
      const double log_w =
          std::log(half * rule.weights[i]) + density_.log_pdf(theta) - 0.5 * z * z;
      sums.add(log_w, theta);
    }
  }
  const double z0 = d / sigma_;
  const double log_point = std::log(prior_.alpha) - 0.5 * z0 * z0;
  return combine(log_point, std::log1p(-prior_.alpha), sums);
}

double ShrinkageRule::shrink_unbounded(double d) const {
  // A Gaussian likelihood times a skew normal density is again skew normal,
  // so the marginal and the posterior mean are available in closed form:
  //   marginal = 2 phi_s(d) Phi(kappa),
  //   mean     = mu + v lambda phi(kappa) / (sqrt(1 + lambda^2 v) Phi(kappa)),
  // with s^2 = sigma^2 + tau^2, mu = d tau^2 / s^2, v = sigma^2 tau^2 / s^2,
  // lambda = gamma / tau and kappa = lambda mu / sqrt(1 + lambda^2 v).
  const auto& sn = std::get<SkewNormalPrior>(prior_.continuous);
  const double var_noise = sigma_ * sigma_;
  const double var_prior = sn.tau * sn.tau;
  const double var_total = var_noise + var_prior;
  const double mu = d * var_prior / var_total;
  const double v = var_noise * var_prior / var_total;
  const double lambda = sn.gamma / sn.tau;
  const double root = std::sqrt(1.0 + lambda * lambda * v);
  const double kappa = lambda * mu / root;
  const double log_phi_kappa = log_normal_cdf(kappa);
  const double mills =
      std::exp(-0.5 * kappa * kappa - 0.5 * std::log(2.0 * std::numbers::pi) - log_phi_kappa);
  const double mean = mu + v * lambda * mills / root;

  const double log_slab = std::log1p(-prior_.alpha) + std::log(2.0) -
                          0.5 * d * d / var_total - 0.5 * std::log(var_total) + log_phi_kappa;
  const double log_point = std::log(prior_.alpha) - 0.5 * d * d / var_noise - std::log(sigma_);
  // Posterior weight of the slab, 1 / (1 + exp(log_point - log_slab)).
  const double slab_weight = 1.0 / (1.0 + std::exp(log_point - log_slab));
  return slab_weight * mean;
}

double alpha_policy(int level, int j0, double beta_exponent) {
  if (level <= j0) {
    throw_invalid("level-dependent weight needs j > j0 (j=" + std::to_string(level) +
                  ", j0=" + std::to_string(j0) + ")");
  }
  if (!(beta_exponent > 0.0 && std::isfinite(beta_exponent))) {
    throw_invalid("weight exponent beta must be positive");
  }
  return 1.0 - std::pow(static_cast<double>(level - j0 + 1), -beta_exponent);
}

double m_policy(std::span<const double> level_coeffs) {
  if (level_coeffs.empty()) throw_invalid("cannot take the support of an empty level");
  double largest = 0.0;
  for (double c : level_coeffs) largest = std::max(largest, std::abs(c));
  return largest;
}

double estimate_sigma(std::span<const double> finest_details) {
  if (finest_details.empty()) {
    throw_invalid("noise estimate needs a non-empty finest level");
  }
  std::vector<double> magnitudes(finest_details.size());
  std::transform(finest_details.begin(), finest_details.end(), magnitudes.begin(),
                 [](double x) { return std::abs(x); });
  const std::size_t n = magnitudes.size();
  const std::size_t mid = n / 2;
  std::nth_element(magnitudes.begin(), magnitudes.begin() + mid, magnitudes.end());
  double median = magnitudes[mid];
  if (n % 2 == 0) {
    const double lower = *std::max_element(magnitudes.begin(), magnitudes.begin() + mid);
    median = 0.5 * (median + lower);
  }
  const double sigma = median / 0.6745;
  if (!(sigma > 0.0)) {
    throw_computation("estimated noise level is 0 (finest-level median |d| = 0); "
                      "sigma_hat = 0 is invalid");
  }
  return sigma;
}

void shrink_levels(WaveletDecomposition& decomp, const AsymmetricPrior& family,
                   const PolicyConfig& policy, double sigma,
                   const QuadratureConfig& config) {
  if (policy.j0 != decomp.j0) {
    throw_invalid("policy j0=" + std::to_string(policy.j0) +
                  " differs from decomposition j0=" + std::to_string(decomp.j0));
  }
  for (int level = decomp.j0 + 1; level < decomp.levels(); ++level) {
    auto& coeffs = decomp.detail(level);
    const double m = m_policy(coeffs);
    if (m == 0.0) continue;
    const double alpha = alpha_policy(level, policy.j0, policy.beta_exponent);
    const ShrinkageRule rule({alpha, with_half_support(family, m)}, sigma, config);
    for (double& c : coeffs) c = rule.shrink(c);
  }
}

DenoiseResult denoise(std::span<const double> signal, const WaveletBasis& basis,
                      const AsymmetricPrior& family, const PolicyConfig& policy,
                      const QuadratureConfig& config) {
  DenoiseResult result;
  result.shrunk = dwt(signal, basis, policy.j0);
  result.sigma = policy.fixed_sigma
                     ? *policy.fixed_sigma
                     : estimate_sigma(result.shrunk.details.back());
  shrink_levels(result.shrunk, family, policy, result.sigma, config);
  result.estimate = idwt(result.shrunk, basis);
  return result;
}

}  // namespace asyshrink
