// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The asyshrink Authors

#include "asyshrink/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "asyshrink/error.hpp"
#include "asyshrink/shrinkage.hpp"

namespace asyshrink {

double soft(double d, double lambda) {
  if (!(lambda >= 0.0)) throw_invalid("soft threshold must be non-negative");
  const double magnitude = std::abs(d) - lambda;
  if (magnitude <= 0.0) return 0.0;
  return std::copysign(magnitude, d);
}

double sure_risk(std::span<const double> coeffs, double sigma, double lambda) {
  const double var = sigma * sigma;
  double total = static_cast<double>(coeffs.size()) * var;
  for (double d : coeffs) {
    const double a = std::abs(d);
    if (a <= lambda) {
      total += d * d - 2.0 * var;
    } else {
      total += lambda * lambda;
    }
  }
  return total;
}

double sure_threshold(std::span<const double> coeffs, double sigma) {
  if (coeffs.empty()) throw_invalid("SURE threshold needs a non-empty level");
  if (!(sigma > 0.0)) throw_invalid("SURE threshold needs sigma > 0");
  std::vector<double> mags(coeffs.size());
  std::transform(coeffs.begin(), coeffs.end(), mags.begin(),
                 [](double d) { return std::abs(d); });
  std::sort(mags.begin(), mags.end());

  // Candidate lambda = mags[k] covers indices 0..last with mags <= lambda;
  // SURE = n s^2 + sum_{i<=last} (d_i^2 - 2 s^2) + (n - last - 1) lambda^2.
  const double var = sigma * sigma;
  const std::size_t n = mags.size();
  double best_lambda = 0.0;
  double prefix = 0.0;
  std::size_t i = 0;
  // lambda = 0 counts the exact zeros.
  while (i < n && mags[i] == 0.0) {
    prefix += -2.0 * var;
    ++i;
  }
  double best = static_cast<double>(n) * var + prefix;
  while (i < n) {
    const double lambda = mags[i];
    while (i < n && mags[i] == lambda) {
      prefix += mags[i] * mags[i] - 2.0 * var;
      ++i;
    }
    const double value = static_cast<double>(n) * var + prefix +
                         static_cast<double>(n - i) * lambda * lambda;
    if (value < best) {
      best = value;
      best_lambda = lambda;
    }
  }
  return best_lambda;
}

namespace {

std::vector<double> soft_reconstruct(WaveletDecomposition decomp,
                                     const WaveletBasis& basis,
                                     std::span<const double> thresholds) {
  for (int level = decomp.j0; level < decomp.levels(); ++level) {
    const double lambda = thresholds[static_cast<std::size_t>(level - decomp.j0)];
    for (double& c : decomp.detail(level)) c = soft(c, lambda);
  }
  return idwt(decomp, basis);
}

double max_detail(const WaveletDecomposition& decomp) {
  double largest = 0.0;
  for (const auto& level : decomp.details) largest = std::max(largest, m_policy(level));
  return largest;
}

// Interpolates a half-sample estimate onto the other half's positions:
// midpoint of neighbours, wrapping periodically at the end.
double cv_score(const WaveletDecomposition& even_dec, const WaveletDecomposition& odd_dec,
                std::span<const double> even, std::span<const double> odd,
                const WaveletBasis& basis, double lambda) {
  const std::size_t levels = even_dec.details.size();
  const std::vector<double> thresholds(levels, lambda);
  const auto even_hat = soft_reconstruct(even_dec, basis, thresholds);
  const auto odd_hat = soft_reconstruct(odd_dec, basis, thresholds);
  const std::size_t half = even.size();
  double score = 0.0;
  for (std::size_t j = 0; j < half; ++j) {
    const std::size_t next = (j + 1) % half;
    // Samples are 1-based x_1..x_n: odd = x_1, x_3, ...; even = x_2, x_4, ...
    const double even_mid = 0.5 * (even_hat[j] + even_hat[next]);  // predicts x_{2j+3}
    const double odd_mid = 0.5 * (odd_hat[j] + odd_hat[next]);     // predicts x_{2j+2}
    const double e1 = even_mid - odd[next];
    const double e2 = odd_mid - even[j];
    score += e1 * e1 + e2 * e2;
  }
  return score;
}

}  // namespace

double cv_threshold(std::span<const double> signal, const WaveletBasis& basis, int j0) {
  const std::size_t n = signal.size();
  const int levels = dyadic_level(n);
  if (n < 8) throw_invalid("cross-validation needs at least 8 samples");
  const std::size_t half = n / 2;
  std::vector<double> odd(half);
  std::vector<double> even(half);
  for (std::size_t j = 0; j < half; ++j) {
    odd[j] = signal[2 * j];
    even[j] = signal[2 * j + 1];
  }
  const int half_j0 = std::min(j0, levels - 2);
  const auto odd_dec = dwt(odd, basis, half_j0);
  const auto even_dec = dwt(even, basis, half_j0);

  double lo = 0.0;
  double hi = std::max(max_detail(odd_dec), max_detail(even_dec));
  const double tolerance = 1e-6 * std::max(hi, 1e-300);
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  auto score = [&](double lambda) {
    return cv_score(even_dec, odd_dec, even, odd, basis, lambda);
  };
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = score(x1);
  double f2 = score(x2);
  while (hi - lo > tolerance) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = score(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = score(x2);
    }
  }
  const double best = 0.5 * (lo + hi);
  return best / std::sqrt(1.0 - std::numbers::ln2 / std::log(static_cast<double>(n)));
}

ThresholdResult threshold_denoise(std::span<const double> signal,
                                  const WaveletBasis& basis,
                                  const ThresholdPolicy& policy, int j0) {
  const auto decomp = dwt(signal, basis, j0);
  const std::size_t levels = decomp.details.size();
  ThresholdResult result;
  switch (policy.kind) {
    case ThresholdPolicy::Kind::kFixed:
      if (!(policy.lambda >= 0.0)) throw_invalid("fixed threshold must be non-negative");
      result.thresholds.assign(levels, policy.lambda);
      break;
    case ThresholdPolicy::Kind::kSure:
      result.sigma = estimate_sigma(decomp.details.back());
      if (policy.per_level) {
        for (const auto& level : decomp.details) {
          result.thresholds.push_back(sure_threshold(level, result.sigma));
        }
      } else {
        std::vector<double> all;
        for (const auto& level : decomp.details) all.insert(all.end(), level.begin(), level.end());
        result.thresholds.assign(levels, sure_threshold(all, result.sigma));
      }
      break;
    case ThresholdPolicy::Kind::kCrossValidation:
      result.thresholds.assign(levels, cv_threshold(signal, basis, j0));
      break;
  }
  result.estimate = soft_reconstruct(decomp, basis, result.thresholds);
  return result;
}

}  // namespace asyshrink
