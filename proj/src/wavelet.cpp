// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The asyshrink Authors

#include "asyshrink/wavelet.hpp"

#include <cmath>
#include <charconv>

#include "asyshrink/error.hpp"
#include "daubechies_filters.hpp"

namespace asyshrink {

WaveletBasis::WaveletBasis(std::string name, int vanishing_moments,
                           std::vector<double> lowpass)
    : name_(std::move(name)),
      vanishing_moments_(vanishing_moments),
      lowpass_(std::move(lowpass)) {
  const std::size_t len = lowpass_.size();
  highpass_.resize(len);
  for (std::size_t k = 0; k < len; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    highpass_[k] = sign * lowpass_[len - 1 - k];
  }
}

WaveletBasis WaveletBasis::daubechies(int vanishing_moments) {
  auto filter = detail::daubechies_filter(vanishing_moments);
  if (filter.empty()) {
    throw_invalid("Daubechies basis needs 1..10 vanishing moments, got " +
                  std::to_string(vanishing_moments));
  }
  return WaveletBasis("db" + std::to_string(vanishing_moments),
                      vanishing_moments, std::move(filter));
}

WaveletBasis WaveletBasis::from_name(const std::string& name) {
  if (name == "haar") return daubechies(1);
  if (name.size() > 2 && name.compare(0, 2, "db") == 0) {
    int moments = 0;
    const char* first = name.data() + 2;
    const char* last = name.data() + name.size();
    auto [ptr, ec] = std::from_chars(first, last, moments);
    if (ec == std::errc() && ptr == last) return daubechies(moments);
  }
  throw_invalid("unknown wavelet basis '" + name +
                "' (expected haar or db1..db10)");
}

std::size_t WaveletDecomposition::size() const {
  std::size_t total = coarse.size();
  for (const auto& level : details) total += level.size();
  return total;
}

std::vector<double> WaveletDecomposition::flatten() const {
  std::vector<double> out;
  out.reserve(size());
  out.insert(out.end(), coarse.begin(), coarse.end());
  for (const auto& level : details) out.insert(out.end(), level.begin(), level.end());
  return out;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

int dyadic_level(std::size_t n) {
  if (!is_power_of_two(n)) {
    throw_invalid("signal length " + std::to_string(n) +
                  " is not a power of two");
  }
  int level = 0;
  while ((std::size_t{1} << level) < n) ++level;
  return level;
}

namespace {

// One analysis step: len -> len/2 scaling + len/2 wavelet coefficients.
void analysis_step(std::span<const double> in, const WaveletBasis& basis,
                   std::vector<double>& approx, std::vector<double>& detail) {
  const std::size_t len = in.size();
  const std::size_t half = len / 2;
  const auto h = basis.lowpass();
  const auto g = basis.highpass();
  approx.assign(half, 0.0);
  detail.assign(half, 0.0);
  for (std::size_t k = 0; k < half; ++k) {
    double a = 0.0;
    double d = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      const double x = in[(2 * k + i) % len];
      a += h[i] * x;
      d += g[i] * x;
    }
    approx[k] = a;
    detail[k] = d;
  }
}

void synthesis_step(std::span<const double> approx,
                    std::span<const double> detail, const WaveletBasis& basis,
                    std::vector<double>& out) {
  const std::size_t half = approx.size();
  const std::size_t len = 2 * half;
  const auto h = basis.lowpass();
  const auto g = basis.highpass();
  out.assign(len, 0.0);
  for (std::size_t k = 0; k < half; ++k) {
    for (std::size_t i = 0; i < h.size(); ++i) {
      out[(2 * k + i) % len] += h[i] * approx[k] + g[i] * detail[k];
    }
  }
}

}  // namespace

WaveletDecomposition dwt(std::span<const double> signal,
                         const WaveletBasis& basis, int j0) {
  const int levels = dyadic_level(signal.size());
  if (j0 < 0 || j0 >= levels) {
    throw_invalid("primary level j0=" + std::to_string(j0) +
                  " must satisfy 0 <= j0 < J=" + std::to_string(levels));
  }
  for (std::size_t i = 0; i < signal.size(); ++i) {
    if (!std::isfinite(signal[i])) {
      throw_invalid("signal value at index " + std::to_string(i) +
                    " is not finite");
    }
  }

  WaveletDecomposition out;
  out.j0 = j0;
  out.details.resize(static_cast<std::size_t>(levels - j0));

  std::vector<double> current(signal.begin(), signal.end());
  std::vector<double> approx;
  for (int level = levels - 1; level >= j0; --level) {
    analysis_step(current, basis, approx, out.detail(level));
    current.swap(approx);
  }
  out.coarse = std::move(current);
  return out;
}

std::vector<double> idwt(const WaveletDecomposition& decomp,
                         const WaveletBasis& basis) {
  if (decomp.j0 < 0) throw_invalid("negative primary level in decomposition");
  if (decomp.coarse.size() != (std::size_t{1} << decomp.j0)) {
    throw_invalid("coarse block has " + std::to_string(decomp.coarse.size()) +
                  " entries, expected 2^j0 = " +
                  std::to_string(std::size_t{1} << decomp.j0));
  }
  for (int level = decomp.j0; level < decomp.levels(); ++level) {
    const std::size_t expected = std::size_t{1} << level;
    if (decomp.detail(level).size() != expected) {
      throw_invalid("detail level " + std::to_string(level) + " has " +
                    std::to_string(decomp.detail(level).size()) +
                    " entries, expected " + std::to_string(expected));
    }
  }

  std::vector<double> current = decomp.coarse;
  std::vector<double> next;
  for (int level = decomp.j0; level < decomp.levels(); ++level) {
    synthesis_step(current, decomp.detail(level), basis, next);
    current.swap(next);
  }
  return current;
}

}  // namespace asyshrink
