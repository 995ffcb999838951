// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The asyshrink Authors

#pragma once

#include <span>
#include <vector>

#include "asyshrink/wavelet.hpp"

namespace asyshrink {

/// sign(d) * max(|d| - lambda, 0). Throws for negative lambda.
double soft(double d, double lambda);

/// Stein unbiased risk estimate of soft thresholding at `lambda`:
/// n sigma^2 + sum min(d^2, lambda^2) - 2 sigma^2 #{|d| <= lambda}.
double sure_risk(std::span<const double> coeffs, double sigma, double lambda);

/// Minimizer of sure_risk over {0} and the coefficient magnitudes; exact
/// ties resolve to the smallest threshold.
double sure_threshold(std::span<const double> coeffs, double sigma);

/// Two-fold cross-validated soft threshold. The series is split into odd and
/// even samples; each half is thresholded, linearly interpolated onto the
/// other half and scored against it. The minimizing threshold (golden
/// section on [0, max |d|]) is rescaled by (1 - log 2 / log n)^(-1/2) to
/// the full sample size. Requires n >= 8.
double cv_threshold(std::span<const double> signal, const WaveletBasis& basis, int j0);

struct ThresholdPolicy {
  enum class Kind { kFixed, kSure, kCrossValidation };
  Kind kind = Kind::kSure;
  double lambda = 0.0;  // used by kFixed
  /// One threshold per detail level (SURE) instead of a single global one.
  bool per_level = true;
};

struct ThresholdResult {
  std::vector<double> estimate;
  /// Threshold applied to each detail level j0..J-1.
  std::vector<double> thresholds;
  /// Noise estimate used by SURE; zero for the other policies.
  double sigma = 0.0;
};

/// Soft thresholding of detail levels j0..J-1. SURE uses the finest-level
/// MAD noise estimate. Cross-validation always yields a global threshold.
ThresholdResult threshold_denoise(std::span<const double> signal,
                                  const WaveletBasis& basis,
                                  const ThresholdPolicy& policy, int j0);

}  // namespace asyshrink
