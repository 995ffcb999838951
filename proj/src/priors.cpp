// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The asyshrink Authors

#include "asyshrink/priors.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/owens_t.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "asyshrink/error.hpp"

namespace asyshrink {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double log_normal_cdf(double z) {
  if (z > -30.0) {
    if (z > 5.0) return std::log1p(-0.5 * std::erfc(z / std::numbers::sqrt2));
    return std::log(normal_cdf(z));
  }
  // Mills-ratio asymptotic series.
  const double r = 1.0 / (z * z);
  const double series = 1.0 - r * (1.0 - 3.0 * r * (1.0 - 5.0 * r * (1.0 - 7.0 * r)));
  return -0.5 * z * z - 0.5 * std::log(2.0 * std::numbers::pi) - std::log(-z) +
         std::log(series);
}

double open_uniform(Rng& rng) {
  // 53 random bits mapped to the midpoints of a 2^-53 grid: never 0 or 1.
  const auto bits = rng() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

void validate(const AsymmetricPrior& prior) {
  std::visit(
      Overloaded{
          [](const BetaPrior& p) {
            if (!positive(p.a) || !positive(p.b) || !positive(p.m)) {
              throw_invalid("beta prior needs a, b, m > 0: " + describe(p));
            }
          },
          [](const KumaraswamyPrior& p) {
            if (!positive(p.a) || !positive(p.b) || !positive(p.m)) {
              throw_invalid("Kumaraswamy prior needs a, b, m > 0: " + describe(p));
            }
          },
          [](const TriangularPrior& p) {
            if (!positive(p.m) || !std::isfinite(p.mode) || !(std::abs(p.mode) < p.m)) {
              throw_invalid("triangular prior needs m > 0 and mode in (-m, m): " +
                            describe(p));
            }
          },
          [](const SkewNormalPrior& p) {
            if (!positive(p.tau) || !std::isfinite(p.gamma)) {
              throw_invalid("skew normal prior needs tau > 0 and finite gamma: " +
                            describe(p));
            }
          },
      },
      prior);
}

void validate(const MixturePrior& prior) {
  if (!(prior.alpha > 0.0 && prior.alpha < 1.0)) {
    std::ostringstream os;
    os << "mixture weight alpha must lie in (0, 1), got " << prior.alpha;
    throw_invalid(os.str());
  }
  validate(prior.continuous);
}

std::string describe(const AsymmetricPrior& prior) {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const BetaPrior& p) {
                   os << "beta(a=" << p.a << ", b=" << p.b << ", m=" << p.m << ")";
                 },
                 [&](const KumaraswamyPrior& p) {
                   os << "kumaraswamy(a=" << p.a << ", b=" << p.b << ", m=" << p.m
                      << ")";
                 },
                 [&](const TriangularPrior& p) {
                   os << "triangular(mode=" << p.mode << ", m=" << p.m << ")";
                 },
                 [&](const SkewNormalPrior& p) {
                   os << "skewnormal(tau=" << p.tau << ", gamma=" << p.gamma << ")";
                 },
             },
             prior);
  return os.str();
}

std::string family_name(const AsymmetricPrior& prior) {
  return std::visit(Overloaded{
                        [](const BetaPrior&) { return std::string("beta"); },
                        [](const KumaraswamyPrior&) { return std::string("kumaraswamy"); },
                        [](const TriangularPrior&) { return std::string("triangular"); },
                        [](const SkewNormalPrior&) { return std::string("skewnormal"); },
                    },
                    prior);
}

bool is_bounded(const AsymmetricPrior& prior) {
  return !std::holds_alternative<SkewNormalPrior>(prior);
}

double half_support(const AsymmetricPrior& prior) {
  return std::visit(
      Overloaded{
          [](const BetaPrior& p) { return p.m; },
          [](const KumaraswamyPrior& p) { return p.m; },
          [](const TriangularPrior& p) { return p.m; },
          [](const SkewNormalPrior&) { return std::numeric_limits<double>::infinity(); },
      },
      prior);
}

std::vector<double> kinks(const AsymmetricPrior& prior) {
  if (const auto* tri = std::get_if<TriangularPrior>(&prior)) return {tri->mode};
  return {};
}

AsymmetricPrior with_half_support(const AsymmetricPrior& prior, double m) {
  return std::visit(
      Overloaded{
          [m](BetaPrior p) -> AsymmetricPrior {
            p.m = m;
            return p;
          },
          [m](KumaraswamyPrior p) -> AsymmetricPrior {
            p.m = m;
            return p;
          },
          [m](TriangularPrior p) -> AsymmetricPrior {
            const double limit = m * (1.0 - 1e-6);
            p.mode = std::clamp(p.mode, -limit, limit);
            p.m = m;
            return p;
          },
          [](SkewNormalPrior p) -> AsymmetricPrior { return p; },
      },
      prior);
}

PriorDensity::PriorDensity(const AsymmetricPrior& prior) : prior_(prior) {
  validate(prior_);
  log_norm_ = std::visit(
      Overloaded{
          [](const BetaPrior& p) {
            return -(p.a + p.b - 1.0) * std::log(2.0 * p.m) -
                   (std::lgamma(p.a) + std::lgamma(p.b) - std::lgamma(p.a + p.b));
          },
          [](const KumaraswamyPrior& p) {
            return std::log(p.a * p.b) - std::log(2.0 * p.m);
          },
          [](const TriangularPrior&) { return 0.0; },
          [](const SkewNormalPrior& p) {
            return std::log(2.0 / p.tau) - 0.5 * std::log(2.0 * std::numbers::pi);
          },
      },
      prior_);
}

double PriorDensity::log_pdf(double theta) const {
  return std::visit(
      Overloaded{
          [&](const BetaPrior& p) {
            if (!(std::abs(theta) < p.m)) return kNegInf;
            return log_norm_ + (p.a - 1.0) * std::log(theta + p.m) +
                   (p.b - 1.0) * std::log(p.m - theta);
          },
          [&](const KumaraswamyPrior& p) {
            if (!(std::abs(theta) < p.m)) return kNegInf;
            const double log_x = std::log((theta + p.m) / (2.0 * p.m));
            // 1 - x^a from the distance to the upper edge keeps precision near m.
            const double log_tail =
                std::log(-std::expm1(p.a * std::log1p(-(p.m - theta) / (2.0 * p.m))));
            return log_norm_ + (p.a - 1.0) * log_x + (p.b - 1.0) * log_tail;
          },
          [&](const TriangularPrior& p) {
            if (!(std::abs(theta) < p.m)) return kNegInf;
            if (theta <= p.mode) return std::log((theta + p.m) / (p.m * (p.m + p.mode)));
            return std::log((p.m - theta) / (p.m * (p.m - p.mode)));
          },
          [&](const SkewNormalPrior& p) {
            const double z = theta / p.tau;
            return log_norm_ - 0.5 * z * z + log_normal_cdf(p.gamma * z);
          },
      },
      prior_);
}

double PriorDensity::pdf(double theta) const { return std::exp(log_pdf(theta)); }

double pdf(const AsymmetricPrior& prior, double theta) {
  return PriorDensity(prior).pdf(theta);
}

double log_pdf(const AsymmetricPrior& prior, double theta) {
  return PriorDensity(prior).log_pdf(theta);
}

double cdf(const AsymmetricPrior& prior, double theta) {
  validate(prior);
  return std::visit(
      Overloaded{
          [&](const BetaPrior& p) {
            if (theta <= -p.m) return 0.0;
            if (theta >= p.m) return 1.0;
            return boost::math::ibeta(p.a, p.b, (theta + p.m) / (2.0 * p.m));
          },
          [&](const KumaraswamyPrior& p) {
            if (theta <= -p.m) return 0.0;
            if (theta >= p.m) return 1.0;
            const double x = (theta + p.m) / (2.0 * p.m);
            return -std::expm1(p.b * std::log1p(-std::pow(x, p.a)));
          },
          [&](const TriangularPrior& p) {
            if (theta <= -p.m) return 0.0;
            if (theta >= p.m) return 1.0;
            if (theta <= p.mode) {
              return (theta + p.m) * (theta + p.m) / (2.0 * p.m * (p.m + p.mode));
            }
            return 1.0 - (p.m - theta) * (p.m - theta) / (2.0 * p.m * (p.m - p.mode));
          },
          [&](const SkewNormalPrior& p) {
            const double z = theta / p.tau;
            return normal_cdf(z) - 2.0 * boost::math::owens_t(z, p.gamma);
          },
      },
      prior);
}

double sample(const AsymmetricPrior& prior, Rng& rng) {
  return std::visit(
      Overloaded{
          [&](const BetaPrior& p) {
            std::gamma_distribution<double> ga(p.a, 1.0);
            std::gamma_distribution<double> gb(p.b, 1.0);
            for (;;) {
              const double x = ga(rng);
              const double y = gb(rng);
              const double theta = p.m * (2.0 * x / (x + y) - 1.0);
              if (std::abs(theta) < p.m) return theta;
            }
          },
          [&](const KumaraswamyPrior& p) {
            for (;;) {
              const double u = open_uniform(rng);
              const double x = std::pow(-std::expm1(std::log1p(-u) / p.b), 1.0 / p.a);
              const double theta = p.m * (2.0 * x - 1.0);
              if (std::abs(theta) < p.m) return theta;
            }
          },
          [&](const TriangularPrior& p) {
            for (;;) {
              const double u = open_uniform(rng);
              const double split = (p.mode + p.m) / (2.0 * p.m);
              const double theta =
                  u <= split ? -p.m + std::sqrt(2.0 * p.m * (p.m + p.mode) * u)
                             : p.m - std::sqrt(2.0 * p.m * (p.m - p.mode) * (1.0 - u));
              if (std::abs(theta) < p.m) return theta;
            }
          },
          [&](const SkewNormalPrior& p) {
            std::normal_distribution<double> normal;
            const double delta = p.gamma / std::sqrt(1.0 + p.gamma * p.gamma);
            const double z1 = std::abs(normal(rng));
            const double z2 = normal(rng);
            return p.tau * (delta * z1 + std::sqrt(1.0 - delta * delta) * z2);
          },
      },
      prior);
}

double sample_mixture(const MixturePrior& prior, Rng& rng) {
  if (open_uniform(rng) < prior.alpha) return 0.0;
  return sample(prior.continuous, rng);
}

}  // namespace asyshrink
