// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The asyshrink Authors

#pragma once

#include <span>
#include <string>
#include <vector>

namespace asyshrink {

/// Orthonormal compactly supported wavelet described by its low-pass filter.
/// The high-pass filter is derived by the quadrature-mirror relation
/// g[k] = (-1)^k h[L-1-k].
class WaveletBasis {
 public:
  /// Daubechies extremal-phase basis with 1..10 vanishing moments.
  static WaveletBasis daubechies(int vanishing_moments);

  /// Parses identifiers of the form "db<N>" (also "haar" for db1).
  static WaveletBasis from_name(const std::string& name);

  const std::string& name() const { return name_; }
  int vanishing_moments() const { return vanishing_moments_; }
  std::span<const double> lowpass() const { return lowpass_; }
  std::span<const double> highpass() const { return highpass_; }

 private:
  WaveletBasis(std::string name, int vanishing_moments,
               std::vector<double> lowpass);

  std::string name_;
  int vanishing_moments_;
  std::vector<double> lowpass_;
  std::vector<double> highpass_;
};

/// Coefficients of a periodized orthogonal DWT.
///
/// `coarse` holds the 2^j0 scaling coefficients; `details[i]` holds the
/// 2^(j0+i) wavelet coefficients of level j0+i, for levels j0..J-1.
struct WaveletDecomposition {
  std::vector<double> coarse;
  std::vector<std::vector<double>> details;
  int j0 = 0;

  /// Number of levels J, with n = 2^J.
  int levels() const { return j0 + static_cast<int>(details.size()); }
  std::size_t size() const;

  std::vector<double>& detail(int level) { return details.at(level - j0); }
  const std::vector<double>& detail(int level) const {
    return details.at(level - j0);
  }

  /// Coefficients laid out as [coarse, detail j0, ..., detail J-1].
  std::vector<double> flatten() const;
};

bool is_power_of_two(std::size_t n);

/// log2(n) for a power of two; throws otherwise.
int dyadic_level(std::size_t n);

/// Forward transform by the Mallat pyramid with circular boundary handling.
/// Throws on non-dyadic input, non-finite values, or j0 >= J.
WaveletDecomposition dwt(std::span<const double> signal,
                         const WaveletBasis& basis, int j0);

/// Exact inverse of dwt(). Throws if level sizes are inconsistent.
std::vector<double> idwt(const WaveletDecomposition& decomp,
                         const WaveletBasis& basis);

}  // namespace asyshrink
