// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The asyshrink Authors

#pragma once

#include <memory>
#include <vector>

namespace asyshrink {

/// Nodes and weights of an interpolatory quadrature rule.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [-1, 1]. Rules are computed once per n and
/// shared; the returned pointer stays valid for the life of the process.
std::shared_ptr<const QuadratureRule> gauss_legendre(int n);

/// n-point Gauss-Hermite rule for the weight exp(-x^2) on the real line.
std::shared_ptr<const QuadratureRule> gauss_hermite(int n);

/// Rule for E[f(Z)], Z ~ N(0,1): nodes sqrt(2) x_i, weights w_i / sqrt(pi).
std::shared_ptr<const QuadratureRule> standard_normal_rule(int n);

/// Maps a [-1, 1] rule onto [lo, hi], appending to `nodes`/`weights`.
void append_mapped(const QuadratureRule& rule, double lo, double hi,
                   std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace asyshrink
