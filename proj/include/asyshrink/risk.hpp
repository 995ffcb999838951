// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The asyshrink Authors

#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "asyshrink/priors.hpp"
#include "asyshrink/shrinkage.hpp"

namespace asyshrink {

/// Any estimator of theta from a single observation d.
using RuleFunction = std::function<double(double)>;

struct RiskOptions {
  /// Gauss-Hermite nodes for expectations over d ~ N(theta, sigma^2).
  int outer_nodes = 96;
  /// Gauss-Legendre nodes per piece for integrals over theta.
  int theta_nodes = 64;
};

/// Frequentist summary of a rule at one theta under squared error loss.
struct RiskPoint {
  double theta = 0.0;
  double mean = 0.0;  // E[delta(d)]
  double squared_bias = 0.0;
  double variance = 0.0;
  double risk = 0.0;  // E[(delta(d) - theta)^2]
};

RiskPoint risk_point(const RuleFunction& rule, double sigma, double theta,
                     const RiskOptions& options = {});

double squared_bias(const ShrinkageRule& rule, double theta,
                    const RiskOptions& options = {});
double variance(const ShrinkageRule& rule, double theta,
                const RiskOptions& options = {});
double frequentist_risk(const ShrinkageRule& rule, double theta,
                        const RiskOptions& options = {});

/// alpha R(0) + (1 - alpha) * integral R(theta) g(theta) dtheta under the
/// evaluation prior, which need not be the prior that built the rule.
double bayes_risk(const RuleFunction& rule, double sigma,
                  const MixturePrior& evaluation_prior,
                  const RiskOptions& options = {});
double bayes_risk(const ShrinkageRule& rule, const MixturePrior& evaluation_prior,
                  const RiskOptions& options = {});

struct RiskGrid {
  std::vector<double> theta;
  std::vector<double> delta;  // rule evaluated at d = theta
  std::vector<double> squared_bias;
  std::vector<double> variance;
  std::vector<double> risk;
};

/// Evaluates `rule` on `thetas`; points run concurrently and are written by
/// index, so the grid is independent of scheduling.
RiskGrid risk_grid(const RuleFunction& rule, double sigma,
                   std::span<const double> thetas, const RiskOptions& options = {});

/// `points` equally spaced values from lo to hi inclusive (lo alone if 1).
std::vector<double> linspace(double lo, double hi, int points);

/// CSV with header theta,delta,squared_bias,variance,risk.
void write_csv(std::ostream& out, const RiskGrid& grid);

}  // namespace asyshrink
