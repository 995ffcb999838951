// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The asyshrink Authors

#include "asyshrink/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "asyshrink/error.hpp"

namespace asyshrink {

namespace {

QuadratureRule compute_legendre(int n) {
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (x * p0 - p1) / (x * x - 1.0);
      const double step = p0 / dp;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return rule;
}

// Newton iteration on the orthonormal Hermite recurrence, with the classic
// asymptotic starting guesses for the largest roots.
QuadratureRule compute_hermite(int n) {
  const double pim4 = std::pow(std::numbers::pi, -0.25);
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < half; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.nodes[1];
    } else {
      z = 2.0 * z - rule.nodes[static_cast<std::size_t>(i - 2)];
    }
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = pim4;
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double step = p1 / pp;
      z -= step;
      if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    rule.nodes[static_cast<std::size_t>(i)] = z;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = -z;
    rule.weights[static_cast<std::size_t>(i)] = 2.0 / (pp * pp);
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = 2.0 / (pp * pp);
  }
  // Stored largest-first by the recurrence above; return ascending.
  std::reverse(rule.nodes.begin(), rule.nodes.end());
  std::reverse(rule.weights.begin(), rule.weights.end());
  return rule;
}

QuadratureRule compute_standard_normal(int n) {
  QuadratureRule rule = *gauss_hermite(n);
  const double scale = std::sqrt(2.0);
  const double norm = 1.0 / std::sqrt(std::numbers::pi);
  for (auto& x : rule.nodes) x *= scale;
  for (auto& w : rule.weights) w *= norm;
  return rule;
}

class RuleCache {
 public:
  explicit RuleCache(QuadratureRule (*compute)(int)) : compute_(compute) {}

  std::shared_ptr<const QuadratureRule> get(int n) {
    if (n < 1) throw_invalid("quadrature needs at least one node");
    std::lock_guard lock(mutex_);
    auto& slot = rules_[n];
    if (!slot) slot = std::make_shared<const QuadratureRule>(compute_(n));
    return slot;
  }

 private:
  QuadratureRule (*compute_)(int);
  std::mutex mutex_;
  std::map<int, std::shared_ptr<const QuadratureRule>> rules_;
};

}  // namespace

std::shared_ptr<const QuadratureRule> gauss_legendre(int n) {
  static RuleCache cache(compute_legendre);
  return cache.get(n);
}

std::shared_ptr<const QuadratureRule> gauss_hermite(int n) {
  static RuleCache cache(compute_hermite);
  return cache.get(n);
}

std::shared_ptr<const QuadratureRule> standard_normal_rule(int n) {
  static RuleCache cache(compute_standard_normal);
  return cache.get(n);
}

void append_mapped(const QuadratureRule& rule, double lo, double hi,
                   std::vector<double>& nodes, std::vector<double>& weights) {
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    nodes.push_back(mid + half * rule.nodes[i]);
    weights.push_back(half * rule.weights[i]);
  }
}

}  // namespace asyshrink
