// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The asyshrink Authors

#include <doctest.h>

#include <algorithm>
#include <boost/math/distributions/skew_normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <functional>
#include <numbers>

#include "asyshrink/error.hpp"
#include "asyshrink/priors.hpp"

using namespace asyshrink;

namespace {

double integrate(const std::function<double(double)>& f, double lo, double hi) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-13);
}

double total_mass(const AsymmetricPrior& prior) {
  const double m = half_support(prior);
  auto f = [&](double t) { return pdf(prior, t); };
  if (std::isinf(m)) return integrate(f, -std::numeric_limits<double>::infinity(),
                                      std::numeric_limits<double>::infinity());
  std::vector<double> cuts{-m};
  for (double k : kinks(prior)) cuts.push_back(k);
  cuts.push_back(m);
  double mass = 0.0;
  // Square-root substitution at both ends of every piece removes the
  // integrable endpoint singularities of shapes below one.
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    const double half = std::sqrt(0.5 * (hi - lo));
    mass += integrate([&](double u) { return 2.0 * u * f(lo + u * u); }, 0.0, half);
    mass += integrate([&](double u) { return 2.0 * u * f(hi - u * u); }, 0.0, half);
  }
  return mass;
}

// Closed-form CDFs written independently of the library.
double reference_cdf(const AsymmetricPrior& prior, double t) {
  struct Visitor {
    double t;
    double operator()(const BetaPrior& p) const {
      const double x = std::clamp((t + p.m) / (2.0 * p.m), 0.0, 1.0);
      return boost::math::ibeta(p.a, p.b, x);
    }
    double operator()(const KumaraswamyPrior& p) const {
      const double x = std::clamp((t + p.m) / (2.0 * p.m), 0.0, 1.0);
      return 1.0 - std::pow(1.0 - std::pow(x, p.a), p.b);
    }
    double operator()(const TriangularPrior& p) const {
      if (t <= -p.m) return 0.0;
      if (t >= p.m) return 1.0;
      if (t <= p.mode) return (t + p.m) * (t + p.m) / (2.0 * p.m * (p.m + p.mode));
      return 1.0 - (p.m - t) * (p.m - t) / (2.0 * p.m * (p.m - p.mode));
    }
    double operator()(const SkewNormalPrior& p) const {
      return boost::math::cdf(boost::math::skew_normal(0.0, p.tau, p.gamma), t);
    }
  };
  return std::visit(Visitor{t}, prior);
}

double ks_distance(const AsymmetricPrior& prior, std::vector<double> draws) {
  std::sort(draws.begin(), draws.end());
  const double n = static_cast<double>(draws.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const double f = reference_cdf(prior, draws[i]);
    worst = std::max({worst, std::abs(f - static_cast<double>(i) / n),
                      std::abs(static_cast<double>(i + 1) / n - f)});
  }
  return worst;
}

std::vector<double> draws_of(const AsymmetricPrior& prior, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> out(n);
  for (double& v : out) v = sample(prior, rng);
  return out;
}

const std::vector<AsymmetricPrior>& hyperparameter_grid() {
  static const std::vector<AsymmetricPrior> grid{
      BetaPrior{7, 1, 3},        BetaPrior{7, 2, 3},         BetaPrior{5, 5, 1},
      BetaPrior{20, 1, 10},      BetaPrior{1, 1, 2},         BetaPrior{2.5, 0.5, 4},
      KumaraswamyPrior{7, 2, 3}, KumaraswamyPrior{1, 1, 1},  KumaraswamyPrior{3, 0.7, 5},
      TriangularPrior{1, 3},     TriangularPrior{-2, 3},     TriangularPrior{0, 1},
      TriangularPrior{7.9, 8},   SkewNormalPrior{8, 4},      SkewNormalPrior{1, -3},
      SkewNormalPrior{8, 8},     SkewNormalPrior{2, 0},
  };
  return grid;
}

}  // namespace

TEST_CASE("densities integrate to one") {
  for (const auto& prior : hyperparameter_grid()) {
    CAPTURE(describe(prior));
    CHECK(std::abs(total_mass(prior) - 1.0) < 1e-8);
  }
}

TEST_CASE("density vanishes outside the bounded supports") {
  for (const auto& prior : hyperparameter_grid()) {
    if (!is_bounded(prior)) continue;
    const double m = half_support(prior);
    for (double t : {-2.0 * m, -m, m, 1.5 * m}) CHECK(pdf(prior, t) == 0.0);
    CHECK(pdf(prior, 0.5 * m) > 0.0);
  }
}

TEST_CASE("point values") {
  CHECK(pdf(BetaPrior{1, 1, 2}, 0.0) == doctest::Approx(0.25).epsilon(1e-14));
  for (double mode : {-2.0, 1.0, 2.5}) {
    CHECK(pdf(TriangularPrior{mode, 3}, mode) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  }
  CHECK(pdf(SkewNormalPrior{1, 0}, 0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-14));
}

TEST_CASE("Kumaraswamy density matches a term-by-term long double evaluation") {
  const KumaraswamyPrior p{7, 2, 3};
  for (int i = 0; i <= 100; ++i) {
    const long double t = -3.0L + 6.0L * i / 100.0L;
    long double ref = 0.0L;
    if (t > -3.0L && t < 3.0L) {
      const long double m = 3.0L;
      ref = 7.0L * 2.0L * std::pow(t + m, 6.0L) * (std::pow(2.0L * m, 7.0L) - std::pow(t + m, 7.0L)) /
            std::pow(2.0L * m, 14.0L);
    }
    const double got = pdf(p, static_cast<double>(t));
    CHECK(std::abs(got - static_cast<double>(ref)) <= 1e-12 * std::max(1.0, static_cast<double>(ref)));
  }
}

TEST_CASE("large shapes stay finite") {
  const BetaPrior p{20, 1, 10};
  const double peak = pdf(p, 9.999);
  CHECK(std::isfinite(peak));
  CHECK(peak == doctest::Approx(20.0 / 20.0 * std::pow(19.999 / 20.0, 19)).epsilon(1e-10));
  CHECK(std::isfinite(log_pdf(BetaPrior{400, 300, 1}, 0.1)));
}

TEST_CASE("reduction cases") {
  for (double t : {-1.9, -0.3, 0.0, 1.2, 1.99}) {
    CHECK(std::abs(pdf(BetaPrior{1, 1, 2}, t) - 0.25) < 1e-12);
    CHECK(std::abs(pdf(KumaraswamyPrior{1, 1, 2}, t) - 0.25) < 1e-12);
  }
  for (double t : {-7.0, -1.0, 0.0, 0.4, 3.0, 12.0}) {
    const double tau = 2.5;
    const double normal = std::exp(-0.5 * t * t / (tau * tau)) / (tau * std::sqrt(2.0 * std::numbers::pi));
    CHECK(std::abs(pdf(SkewNormalPrior{tau, 0}, t) - normal) < 1e-12);
  }
  // Beta(1, b) through x -> x^(1/a) is Kumaraswamy(a, b).
  for (double t : {-0.8, 0.1, 0.7}) {
    const double x = (t + 1.0) / 2.0;
    CHECK(cdf(KumaraswamyPrior{3, 2, 1}, t) ==
          doctest::Approx(boost::math::ibeta(1.0, 2.0, std::pow(x, 3.0))).epsilon(1e-12));
  }
}

TEST_CASE("library CDF agrees with the closed forms") {
  for (const auto& prior : hyperparameter_grid()) {
    CAPTURE(describe(prior));
    const double m = is_bounded(prior) ? half_support(prior) : 30.0;
    for (int i = 0; i <= 20; ++i) {
      const double t = -m + 2.0 * m * i / 20.0;
      CHECK(std::abs(cdf(prior, t) - reference_cdf(prior, t)) < 1e-10);
    }
  }
}

TEST_CASE("samplers pass a Kolmogorov-Smirnov check") {
  std::uint64_t seed = 100;
  for (const auto& prior : hyperparameter_grid()) {
    CAPTURE(describe(prior));
    const auto draws = draws_of(prior, 100000, ++seed);
    CHECK(ks_distance(prior, draws) < 0.01);
    if (is_bounded(prior)) {
      const double m = half_support(prior);
      CHECK(std::all_of(draws.begin(), draws.end(), [m](double v) { return std::abs(v) < m; }));
    }
  }
}

TEST_CASE("sample moments") {
  {
    const auto draws = draws_of(KumaraswamyPrior{1, 1, 1}, 100000, 1);
    double mean = 0.0;
    for (double v : draws) mean += v;
    CHECK(std::abs(mean / 1e5) < 0.01);
  }
  {
    const auto draws = draws_of(BetaPrior{7, 1, 10}, 100000, 2);
    double mean = 0.0;
    double sq = 0.0;
    for (double v : draws) {
      mean += v;
      sq += v * v;
    }
    mean /= 1e5;
    const double sd = std::sqrt(sq / 1e5 - mean * mean);
    CHECK(std::abs(mean - 7.5) < 3.0 * sd / std::sqrt(1e5));
  }
}

TEST_CASE("mixture sampler") {
  auto zero_fraction = [](double alpha, std::uint64_t seed) {
    Rng rng(seed);
    const MixturePrior prior{alpha, BetaPrior{7, 1, 10}};
    int zeros = 0;
    for (int i = 0; i < 100000; ++i) zeros += sample_mixture(prior, rng) == 0.0;
    return zeros / 1e5;
  };
  CHECK(std::abs(zero_fraction(0.9, 3) - 0.9) < 0.01);
  CHECK(zero_fraction(0.99, 4) > zero_fraction(0.5, 5));

  Rng rng(6);
  const MixturePrior prior{0.8, BetaPrior{7, 1, 10}};
  std::vector<double> nonzero;
  while (nonzero.size() < 100000) {
    const double v = sample_mixture(prior, rng);
    if (v != 0.0) nonzero.push_back(v);
  }
  CHECK(ks_distance(prior.continuous, nonzero) < 0.01);
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(validate(BetaPrior{0, 1, 1}), Error);
  CHECK_THROWS_AS(validate(BetaPrior{1, 1, -1}), Error);
  CHECK_THROWS_AS(validate(KumaraswamyPrior{1, -2, 1}), Error);
  CHECK_THROWS_AS(validate(TriangularPrior{3, 3}), Error);
  CHECK_THROWS_AS(validate(SkewNormalPrior{0, 1}), Error);
  CHECK_THROWS_AS(validate(MixturePrior{1.5, BetaPrior{1, 1, 1}}), Error);
  CHECK_THROWS_AS(validate(MixturePrior{std::nan(""), BetaPrior{1, 1, 1}}), Error);
  CHECK_NOTHROW(validate(BetaPrior{5, 5, 1}));
  CHECK_NOTHROW(validate(TriangularPrior{0, 1}));
}

TEST_CASE("support rescaling") {
  const auto b = std::get<BetaPrior>(with_half_support(BetaPrior{7, 2, 1}, 4.0));
  CHECK(b.m == 4.0);
  CHECK(b.a == 7.0);
  const auto t = std::get<TriangularPrior>(with_half_support(TriangularPrior{8, 1}, 5.0));
  CHECK(t.m == 5.0);
  CHECK(t.mode < 5.0);
  CHECK(t.mode > 4.99);
  CHECK_NOTHROW(validate(AsymmetricPrior{t}));
  const auto s = std::get<SkewNormalPrior>(with_half_support(SkewNormalPrior{8, 4}, 2.0));
  CHECK(s.tau == 8.0);
}

TEST_CASE("normal helpers") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(normal_cdf(1.96) == doctest::Approx(0.9750021048517795).epsilon(1e-12));
  for (double z : {-37.0, -31.0, -29.0, -10.0, 0.0, 3.0}) {
    const double ref = std::log(boost::math::cdf(boost::math::normal(), z));
    CHECK(log_normal_cdf(z) == doctest::Approx(ref).epsilon(1e-10));
  }
  // Mills-ratio bounds phi(z)/|z| (1 - 1/z^2) < Phi(z) < phi(z)/|z| deep in the tail.
  for (double z : {-45.0, -200.0}) {
    const double upper = -0.5 * z * z - 0.5 * std::log(2.0 * std::numbers::pi) - std::log(-z);
    const double lower = upper + std::log1p(-1.0 / (z * z));
    CHECK(log_normal_cdf(z) <= upper);
    CHECK(log_normal_cdf(z) >= lower);
  }
  Rng rng(9);
  for (int i = 0; i < 1000; ++i) {
    const double u = open_uniform(rng);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}
