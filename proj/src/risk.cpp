// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The asyshrink Authors

#include "asyshrink/risk.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <thread>

#include "asyshrink/error.hpp"
#include "asyshrink/quadrature.hpp"

namespace asyshrink {

RiskPoint risk_point(const RuleFunction& rule, double sigma, double theta,
                     const RiskOptions& options) {
  if (!std::isfinite(theta)) throw_invalid("theta must be finite");
  if (!(sigma > 0.0)) throw_invalid("sigma must be positive");
  const QuadratureRule& normal = *standard_normal_rule(options.outer_nodes);

  std::vector<double> values(normal.size());
  for (std::size_t i = 0; i < normal.size(); ++i) {
    values[i] = rule(theta + sigma * normal.nodes[i]);
  }
  RiskPoint point;
  point.theta = theta;
  for (std::size_t i = 0; i < normal.size(); ++i) point.mean += normal.weights[i] * values[i];
  for (std::size_t i = 0; i < normal.size(); ++i) {
    const double spread = values[i] - point.mean;
    const double error = values[i] - theta;
    point.variance += normal.weights[i] * spread * spread;
    point.risk += normal.weights[i] * error * error;
  }
  point.squared_bias = (point.mean - theta) * (point.mean - theta);
  return point;
}

namespace {

RuleFunction as_function(const ShrinkageRule& rule) {
  return [&rule](double d) { return rule.shrink(d); };
}

// Quadrature over theta for the continuous part of the evaluation prior.
void theta_nodes(const AsymmetricPrior& prior, int nodes,
                 std::vector<double>& thetas, std::vector<double>& weights) {
  const QuadratureRule& rule = *gauss_legendre(nodes);
  std::vector<double> cuts;
  if (is_bounded(prior)) {
    const double m = half_support(prior);
    cuts = {-m, m};
    for (double k : kinks(prior)) cuts.push_back(k);
  } else {
    const double tau = std::get<SkewNormalPrior>(prior).tau;
    for (double c : {-12.0, -6.0, -3.0, 0.0, 3.0, 6.0, 12.0}) cuts.push_back(c * tau);
  }
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] > cuts[i]) append_mapped(rule, cuts[i], cuts[i + 1], thetas, weights);
  }
}

}  // namespace

double squared_bias(const ShrinkageRule& rule, double theta, const RiskOptions& options) {
  return risk_point(as_function(rule), rule.sigma(), theta, options).squared_bias;
}

double variance(const ShrinkageRule& rule, double theta, const RiskOptions& options) {
  return risk_point(as_function(rule), rule.sigma(), theta, options).variance;
}

double frequentist_risk(const ShrinkageRule& rule, double theta,
                        const RiskOptions& options) {
  return risk_point(as_function(rule), rule.sigma(), theta, options).risk;
}

double bayes_risk(const RuleFunction& rule, double sigma,
                  const MixturePrior& evaluation_prior, const RiskOptions& options) {
  validate(evaluation_prior);
  const PriorDensity density(evaluation_prior.continuous);
  std::vector<double> thetas;
  std::vector<double> weights;
  theta_nodes(evaluation_prior.continuous, options.theta_nodes, thetas, weights);

  const RiskGrid grid = risk_grid(rule, sigma, thetas, options);
  double continuous = 0.0;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    continuous += weights[i] * density.pdf(thetas[i]) * grid.risk[i];
  }
  const double at_zero = risk_point(rule, sigma, 0.0, options).risk;
  return evaluation_prior.alpha * at_zero + (1.0 - evaluation_prior.alpha) * continuous;
}

double bayes_risk(const ShrinkageRule& rule, const MixturePrior& evaluation_prior,
                  const RiskOptions& options) {
  return bayes_risk(as_function(rule), rule.sigma(), evaluation_prior, options);
}

RiskGrid risk_grid(const RuleFunction& rule, double sigma,
                   std::span<const double> thetas, const RiskOptions& options) {
  const std::size_t count = thetas.size();
  RiskGrid grid;
  grid.theta.assign(thetas.begin(), thetas.end());
  grid.delta.resize(count);
  grid.squared_bias.resize(count);
  grid.variance.resize(count);
  grid.risk.resize(count);

  // Warm the shared quadrature cache before fanning out.
  standard_normal_rule(options.outer_nodes);

  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < count; i += stride) {
      const RiskPoint p = risk_point(rule, sigma, thetas[i], options);
      grid.delta[i] = rule(thetas[i]);
      grid.squared_bias[i] = p.squared_bias;
      grid.variance[i] = p.variance;
      grid.risk[i] = p.risk;
    }
  };

  const std::size_t workers = std::min<std::size_t>(
      std::max(1u, std::thread::hardware_concurrency()), std::max<std::size_t>(1, count / 8));
  if (workers <= 1) {
    work(0, 1);
    return grid;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> threads;
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          work(w, workers);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return grid;
}

std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 1) throw_invalid("grid needs at least one point");
  if (!(std::isfinite(lo) && std::isfinite(hi)) || hi < lo) {
    throw_invalid("grid bounds must be finite with lo <= hi");
  }
  std::vector<double> out(static_cast<std::size_t>(points));
  if (points == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (hi - lo) / (points - 1);
  for (int i = 0; i < points; ++i) out[static_cast<std::size_t>(i)] = lo + step * i;
  out.back() = hi;
  return out;
}

void write_csv(std::ostream& out, const RiskGrid& grid) {
  out << "theta,delta,squared_bias,variance,risk\n";
  out << std::setprecision(10);
  for (std::size_t i = 0; i < grid.theta.size(); ++i) {
    out << grid.theta[i] << ',' << grid.delta[i] << ',' << grid.squared_bias[i] << ','
        << grid.variance[i] << ',' << grid.risk[i] << '\n';
  }
}

}  // namespace asyshrink
