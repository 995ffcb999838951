// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The asyshrink Authors

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "asyshrink/error.hpp"
#include "asyshrink/shrinkage.hpp"

using namespace asyshrink;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Log-densities written out from their closed forms, independent of the library.
double oracle_log_density(const AsymmetricPrior& prior, double t) {
  struct Visitor {
    double t;
    double operator()(const BetaPrior& p) const {
      if (std::abs(t) >= p.m) return -kInf;
      return (p.a - 1) * std::log(t + p.m) + (p.b - 1) * std::log(p.m - t) -
             (p.a + p.b - 1) * std::log(2 * p.m) - std::log(std::beta(p.a, p.b));
    }
    double operator()(const KumaraswamyPrior& p) const {
      if (std::abs(t) >= p.m) return -kInf;
      const double s = 2 * p.m;
      return std::log(p.a * p.b) + (p.a - 1) * std::log(t + p.m) +
             (p.b - 1) * std::log(std::pow(s, p.a) - std::pow(t + p.m, p.a)) - p.a * p.b * std::log(s);
    }
    double operator()(const TriangularPrior& p) const {
      if (std::abs(t) >= p.m) return -kInf;
      if (t <= p.mode) return std::log((t + p.m) / (p.m * (p.m + p.mode)));
      return std::log((p.m - t) / (p.m * (p.m - p.mode)));
    }
    double operator()(const SkewNormalPrior& p) const {
      const double z = t / p.tau;
      const double big_phi = 0.5 * std::erfc(-p.gamma * z / std::numbers::sqrt2);
      return std::log(2 / p.tau) - 0.5 * z * z - 0.5 * std::log(2 * std::numbers::pi) + std::log(big_phi);
    }
  };
  return std::visit(Visitor{t}, prior);
}

// Posterior mean by the trapezoid rule on a dense uniform grid.
double trapezoid_rule(const MixturePrior& prior, double sigma, double d, int points = 200001) {
  double lo;
  double hi;
  if (is_bounded(prior.continuous)) {
    lo = -half_support(prior.continuous);
    hi = -lo;
  } else {
    const double tau = std::get<SkewNormalPrior>(prior.continuous).tau;
    lo = std::min(-14 * tau, d - 14 * sigma);
    hi = std::max(14 * tau, d + 14 * sigma);
  }
  const double h = (hi - lo) / (points - 1);
  std::vector<double> logs(points);
  double peak = -kInf;
  for (int i = 0; i < points; ++i) {
    // One-sided limits at the edges of a bounded support.
    const double t = i == 0 ? lo + 1e-9 * (hi - lo) : (i == points - 1 ? hi - 1e-9 * (hi - lo) : lo + h * i);
    logs[i] = oracle_log_density(prior.continuous, t) - 0.5 * (d - t) * (d - t) / (sigma * sigma);
    peak = std::max(peak, logs[i]);
  }
  const double atom = -0.5 * d * d / (sigma * sigma);
  peak = std::max(peak, atom);
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < points; ++i) {
    const double w = (i == 0 || i == points - 1 ? 0.5 : 1.0) * std::exp(logs[i] - peak);
    num += (lo + h * i) * w;
    den += w;
  }
  num *= h * (1 - prior.alpha);
  den = den * h * (1 - prior.alpha) + prior.alpha * std::exp(atom - peak);
  return num / den;
}

// Closed form for the skew-normal component: marginal 2 phi_s(d) Phi(kappa).
double skew_normal_rule(double alpha, double tau, double gamma, double sigma, double d) {
  const double s2 = sigma * sigma + tau * tau;
  const double mu = d * tau * tau / s2;
  const double v = sigma * sigma * tau * tau / s2;
  const double lambda = gamma / tau;
  const double root = std::sqrt(1 + lambda * lambda * v);
  const double kappa = lambda * mu / root;
  const double big_phi = 0.5 * std::erfc(-kappa / std::numbers::sqrt2);
  const double small_phi = std::exp(-0.5 * kappa * kappa) / std::sqrt(2 * std::numbers::pi);
  const double posterior = mu + v * lambda * small_phi / (root * big_phi);
  const double marginal = 2 * std::exp(-0.5 * d * d / s2) / std::sqrt(2 * std::numbers::pi * s2) * big_phi;
  const double atom = std::exp(-0.5 * d * d / (sigma * sigma)) / std::sqrt(2 * std::numbers::pi * sigma * sigma);
  return (1 - alpha) * marginal * posterior / (alpha * atom + (1 - alpha) * marginal);
}

struct Setting {
  MixturePrior prior;
  double sigma;
};

std::vector<Setting> oracle_settings() {
  return {
      {{0.9, BetaPrior{7, 2, 3}}, 1.0},       {{0.9, BetaPrior{7, 1, 3}}, 1.0},
      {{0.75, BetaPrior{2, 5, 4}}, 0.5},      {{0.95, BetaPrior{20, 1, 10}}, 1.0},
      {{0.5, BetaPrior{5, 5, 2}}, 2.0},       {{0.9, KumaraswamyPrior{7, 2, 3}}, 1.0},
      {{0.9, KumaraswamyPrior{7, 1, 3}}, 1.0}, {{0.8, KumaraswamyPrior{2, 3, 5}}, 0.7},
      {{0.6, KumaraswamyPrior{1, 1, 2}}, 1.0}, {{0.95, KumaraswamyPrior{3, 4, 8}}, 1.5},
      {{0.9, TriangularPrior{1, 3}}, 1.0},     {{0.9, TriangularPrior{-2, 3}}, 1.0},
      {{0.7, TriangularPrior{2.9, 3}}, 0.5},   {{0.9, TriangularPrior{4, 10}}, 2.0},
      {{0.5, TriangularPrior{0.1, 1}}, 0.3},   {{0.9, SkewNormalPrior{8, 8}}, 1.0},
      {{0.9, SkewNormalPrior{8, 3}}, 1.0},     {{0.9, SkewNormalPrior{1, 4}}, 1.0},
      {{0.6, SkewNormalPrior{3, -2}}, 0.5},    {{0.95, SkewNormalPrior{2, 0}}, 2.0},
  };
}

}  // namespace

TEST_CASE("quadrature agrees with a dense trapezoid oracle") {
  for (const auto& s : oracle_settings()) {
    CAPTURE(describe(s.prior.continuous));
    const ShrinkageRule rule(s.prior, s.sigma);
    const double span = is_bounded(s.prior.continuous) ? 2 * half_support(s.prior.continuous) : 20;
    double worst = 0.0;
    for (int i = 0; i <= 40; ++i) {
      const double d = -span + 2 * span * i / 40.0;
      const double exact = trapezoid_rule(s.prior, s.sigma, d);
      const double got = rule(d);
      // Relative error, measured against the posterior scale near sign changes.
      worst = std::max(worst, std::abs(got - exact) / std::max(std::abs(exact), 1e-3));
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("skew-normal rule matches its closed form") {
  for (double tau : {1.0, 3.0, 8.0}) {
    for (double gamma : {-8.0, 0.0, 3.0, 8.0}) {
      const ShrinkageRule rule({0.9, SkewNormalPrior{tau, gamma}}, 1.0);
      for (double d = -25; d <= 25; d += 0.5) {
        const double exact = skew_normal_rule(0.9, tau, gamma, 1.0, d);
        CHECK(std::abs(rule(d) - exact) <= 1e-9 * std::max(1.0, std::abs(exact)));
      }
    }
  }
  const ShrinkageRule rule({0.9, SkewNormalPrior{8, 8}}, 1.0);
  CHECK(rule(10.0) == doctest::Approx(9.8462).epsilon(0).scale(1).epsilon(1e-4));
}

TEST_CASE("extreme observations stay finite") {
  for (const auto& s : oracle_settings()) {
    const ShrinkageRule rule(s.prior, s.sigma);
    for (double d : {-1e4, -300.0, 300.0, 1e4}) CHECK(std::isfinite(rule(d)));
  }
}

TEST_CASE("a dominant point mass kills small observations") {
  for (const auto& s : oracle_settings()) {
    MixturePrior prior = s.prior;
    prior.alpha = 1 - 1e-12;
    const ShrinkageRule rule(prior, s.sigma);
    for (double d = -3 * s.sigma; d <= 3 * s.sigma; d += 0.25 * s.sigma) {
      CHECK(std::abs(rule(d)) < 1e-6);
    }
  }
}

TEST_CASE("bounded rules stay inside the prior support") {
  for (const auto& s : oracle_settings()) {
    if (!is_bounded(s.prior.continuous)) continue;
    const double m = half_support(s.prior.continuous);
    const ShrinkageRule rule(s.prior, s.sigma);
    for (int i = 0; i <= 400; ++i) {
      const double d = -10 * m + 20 * m * i / 400.0;
      CHECK(std::abs(rule(d)) < m);
    }
  }
}

TEST_CASE("larger point mass means more shrinkage") {
  const std::vector<AsymmetricPrior> families{
      BetaPrior{7, 1, 3},        BetaPrior{7, 2, 3},     BetaPrior{7, 3, 3},
      KumaraswamyPrior{7, 2, 3}, TriangularPrior{1, 3},  TriangularPrior{-1, 3},
      SkewNormalPrior{1, 8},     SkewNormalPrior{1, 3},
  };
  const std::vector<double> alphas{0.5, 0.75, 0.9, 0.95, 0.99};
  for (const auto& family : families) {
    CAPTURE(describe(family));
    for (double d : {-6.0, -4.0, -2.0, 2.0, 3.0, 4.5, 6.0}) {
      double previous = kInf;
      for (double alpha : alphas) {
        const double magnitude = std::abs(ShrinkageRule({alpha, family}, 1.0)(d));
        CHECK(magnitude <= previous);
        previous = magnitude;
      }
    }
  }
}

TEST_CASE("Monte Carlo posterior mean") {
  const MixturePrior prior{0.9, BetaPrior{7, 2, 3}};
  const ShrinkageRule rule(prior, 1.0);
  std::mt19937_64 rng(2026);
  std::gamma_distribution<double> ga(7.0);
  std::gamma_distribution<double> gb(2.0);
  std::uniform_real_distribution<double> unit;
  constexpr int kDraws = 1000000;
  std::vector<double> theta(kDraws);
  for (double& t : theta) {
    if (unit(rng) < 0.9) {
      t = 0.0;
    } else {
      const double x = ga(rng);
      t = 3.0 * (2.0 * x / (x + gb(rng)) - 1.0);
    }
  }
  for (double d : {-2.0, 0.0, 2.0}) {
    double sw = 0, swt = 0, sw2 = 0, sw2t = 0, sw2t2 = 0;
    for (double t : theta) {
      const double w = std::exp(-0.5 * (d - t) * (d - t));
      sw += w;
      swt += w * t;
      sw2 += w * w;
      sw2t += w * w * t;
      sw2t2 += w * w * t * t;
    }
    const double mean = swt / sw;
    // Delta-method standard error of the self-normalized estimator.
    const double se = std::sqrt(sw2t2 - 2 * mean * sw2t + mean * mean * sw2) / sw;
    CAPTURE(d);
    CHECK(std::abs(rule(d) - mean) < 3 * se);
  }
}

TEST_CASE("rule is continuous") {
  for (const auto& s : oracle_settings()) {
    const ShrinkageRule rule(s.prior, s.sigma);
    for (double d : {-7.3, -2.0, -0.1, 0.0, 0.4, 1.0, 2.9, 3.0, 5.5, 12.0}) {
      CHECK(std::abs(rule(d + 1e-6) - rule(d)) < 1e-4);
    }
  }
}

TEST_CASE("rule construction is validated") {
  CHECK_THROWS_AS(ShrinkageRule({0.9, BetaPrior{7, 1, 3}}, 0.0), Error);
  CHECK_THROWS_AS(ShrinkageRule({0.9, BetaPrior{7, 1, 3}}, -1.0), Error);
  CHECK_THROWS_AS(ShrinkageRule({1.2, BetaPrior{7, 1, 3}}, 1.0), Error);
  QuadratureConfig few;
  few.legendre_nodes = 16;
  CHECK_THROWS_AS(ShrinkageRule({0.9, BetaPrior{7, 1, 3}}, 1.0, few), Error);
  const ShrinkageRule rule({0.9, BetaPrior{7, 1, 3}}, 1.0);
  CHECK_THROWS_AS(rule(std::nan("")), Error);
}

TEST_CASE("level policies") {
  CHECK(alpha_policy(4, 3, 2.0) == doctest::Approx(0.75));
  CHECK(alpha_policy(6, 3, 2.0) == doctest::Approx(0.9375));
  CHECK(alpha_policy(12, 3, 1.0) == doctest::Approx(0.9));
  CHECK_THROWS_AS(alpha_policy(3, 3, 2.0), Error);
  CHECK_THROWS_AS(alpha_policy(5, 3, 0.0), Error);

  CHECK(m_policy(std::vector<double>{1, -3, 2}) == 3.0);
  CHECK(m_policy(std::vector<double>{0, 0, 0}) == 0.0);
  CHECK(m_policy(std::vector<double>{-5.5, 5.4}) == 5.5);
  CHECK_THROWS_AS(m_policy(std::vector<double>{}), Error);

  CHECK(estimate_sigma(std::vector<double>(10, 0.6745)) == 1.0);
  CHECK(estimate_sigma(std::vector<double>(7, -0.6745 * 2)) == doctest::Approx(2.0));
  CHECK(estimate_sigma(std::vector<double>{0.6745, 3 * 0.6745, -100, 0}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(estimate_sigma(std::vector<double>(8, 0.0)), Error);

  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  std::vector<double> noise(1 << 15);
  for (double& v : noise) v = normal(rng);
  CHECK(std::abs(estimate_sigma(noise) - 1.0) < 0.02);
}

TEST_CASE("denoising pure noise removes most energy") {
  const auto basis = WaveletBasis::daubechies(10);
  double kept = 0.0;
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<double> y(512);
    for (double& v : y) v = normal(rng);
    const auto result = denoise(y, basis, BetaPrior{5, 1, 1}, PolicyConfig{});
    for (std::size_t i = 0; i < y.size(); ++i) {
      kept += result.estimate[i] * result.estimate[i];
      total += y[i] * y[i];
    }
  }
  CHECK(kept < 0.2 * total);
}

TEST_CASE("weak prior leaves a clean signal almost untouched") {
  const auto basis = WaveletBasis::daubechies(4);
  std::vector<double> y(256);
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = 10.0 * std::sin(0.3 * static_cast<double>(i)) + 4.0 * std::cos(0.05 * i * i);
  }
  PolicyConfig policy;
  policy.fixed_sigma = 1e-3;
  policy.beta_exponent = 1e-3;  // alpha(j) ~ 0 on every level
  const auto result = denoise(y, basis, BetaPrior{1, 1, 1}, policy);
  double worst = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    worst = std::max(worst, std::abs(result.estimate[i] - y[i]));
    scale = std::max(scale, std::abs(y[i]));
  }
  CHECK(worst < 0.01 * scale);
}

TEST_CASE("coarse block and primary level pass through") {
  const auto basis = WaveletBasis::daubechies(2);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  std::vector<double> y(128);
  for (double& v : y) v = normal(rng);
  PolicyConfig policy;
  policy.j0 = 2;
  const auto result = denoise(y, basis, TriangularPrior{0.5, 1}, policy);
  const auto input = dwt(y, basis, 2);
  CHECK(result.shrunk.coarse == input.coarse);
  CHECK(result.shrunk.detail(2) == input.detail(2));
  CHECK(result.shrunk.detail(6) != input.detail(6));
  CHECK(result.sigma == doctest::Approx(estimate_sigma(input.detail(6))));
}

TEST_CASE("all-zero input has no noise estimate") {
  const auto basis = WaveletBasis::daubechies(10);
  CHECK_THROWS_AS(denoise(std::vector<double>(512, 0.0), basis, BetaPrior{5, 1, 1}, PolicyConfig{}),
                  Error);
  try {
    denoise(std::vector<double>(512, 0.0), basis, BetaPrior{5, 1, 1}, PolicyConfig{});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kComputation);
  }
}

TEST_CASE("degenerate levels are skipped") {
  const auto basis = WaveletBasis::daubechies(1);
  std::vector<double> y(64, 0.0);
  y[5] = 1.0;  // only a few levels see the impulse under Haar
  PolicyConfig policy;
  policy.fixed_sigma = 0.5;
  policy.j0 = 1;
  WaveletDecomposition d = dwt(std::vector<double>(64, 2.0), basis, 1);
  CHECK_NOTHROW(shrink_levels(d, BetaPrior{5, 1, 1}, policy, 0.5));
  for (const auto& level : d.details) {
    for (double c : level) CHECK(std::abs(c) < 1e-12);
  }
  CHECK_NOTHROW(denoise(y, basis, SkewNormalPrior{8, 4}, policy));
}
