#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

#include "idsm/errors.hpp"
#include "idsm/levy.hpp"
#include "support/oracle.hpp"

using namespace idsm;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ModelSpec one(LevyMeasure1D rho, double b = 0.0, double sigma2 = 0.0) {
  return single_point_model(std::move(rho), b, sigma2);
}

// K(x) for the symmetric tempered stable density by the oracle, split where
// |x y| = 1. Below the kink [[x y]]^2 density = c x^2 y^(1 - alpha) e^(-lambda y).
double k_oracle(double alpha, double c, double lambda, double x) {
  const double kink = 1.0 / std::abs(x);
  const auto inner = [&](double y) { return c * x * x * std::pow(y, 1.0 - alpha) * std::exp(-lambda * y); };
  const auto outer = [&](double y) { return c * std::pow(y, -alpha - 1.0) * std::exp(-lambda * y); };
  return 2.0 * (oracle::integrate(inner, 0.0, kink) + oracle::integrate(outer, kink, kInf));
}

}  // namespace

TEST_CASE("truncate: identity inside, saturation outside") {
  CHECK(truncate(0.5) == 0.5);
  CHECK(truncate(2.0) == 1.0);
  CHECK(truncate(-3.0) == -1.0);
  CHECK(truncate(0.0) == 0.0);
}

TEST_CASE("truncate is odd, 1-Lipschitz and fixes its range") {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> d(-10.0, 10.0);
  for (int i = 0; i < 500; ++i) {
    const double x = d(gen);
    const double y = d(gen);
    CHECK(truncate(-x) == -truncate(x));
    CHECK(std::abs(truncate(x) - truncate(y)) <= std::abs(x - y) + 1e-15);
    CHECK(truncate(truncate(x)) == truncate(x));
    CHECK(std::abs(truncate(x)) <= 1.0);
  }
}

TEST_CASE("stable tail and quantile") {
  const auto rho = LevyMeasure1D::stable(1.5, 2.0);
  CHECK_THAT(rho.tail_plus(3.0), WithinRel(2.0 / 1.5 * std::pow(3.0, -1.5), 1e-14));
  CHECK_THAT(rho.tail_minus(3.0), WithinRel(rho.tail_plus(3.0), 1e-14));

  const auto cauchy = LevyMeasure1D::stable(1.0, 1.0);
  CHECK_THAT(tail_quantile(cauchy, 0.5), WithinRel(2.0, 1e-12));
  const double by_bisection =
      oracle::bisect([&](double x) { return cauchy.tail_plus(x) - 0.5; }, 1e-6, 1e6);
  CHECK_THAT(tail_quantile(cauchy, 0.5), WithinRel(by_bisection, 1e-10));
}

TEST_CASE("point mass quantile is a step inversion") {
  const auto pm = LevyMeasure1D::point_mass(1.0, 1.0);
  CHECK(tail_quantile(pm, 0.5) == 1.0);
  CHECK(tail_quantile(pm, 2.0) == 0.0);
  CHECK(tail_quantile(pm, -0.5) == 0.0);
  const auto sym = LevyMeasure1D::point_mass(1.0, 1.0, true);
  CHECK(tail_quantile(sym, -0.5) == -1.0);
}

TEST_CASE("quantile rejects s = 0") {
  CHECK_THROWS_AS(tail_quantile(LevyMeasure1D::stable(1.5, 1.0), 0.0), ConfigError);
}

TEST_CASE("quantile inverts the tail and is odd for symmetric measures") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> logs(-6.0, 6.0);
  std::uniform_real_distribution<double> alpha(0.2, 1.95);
  for (int i = 0; i < 60; ++i) {
    const double a = alpha(gen);
    const double s = std::pow(10.0, logs(gen));
    for (const auto& rho : {LevyMeasure1D::stable(a, 0.7), LevyMeasure1D::tempered_stable(a, 0.7, 1.3)}) {
      INFO(rho.family_name() << " alpha = " << a << ", s = " << s);
      const double x = tail_quantile(rho, s);
      if (x == 0.0) {
        continue;
      }
      CHECK_THAT(rho.tail_plus(x), WithinRel(s, 1e-10));
      CHECK(tail_quantile(rho, -s) == -x);
      CHECK(tail_quantile(rho, 2.0 * s) <= x);
    }
  }
}

TEST_CASE("b_kernel") {
  SECTION("symmetric measure without drift gives exact zero") {
    const auto m = one(LevyMeasure1D::stable(1.5, 1.0));
    for (double x : {-5.0, -0.3, 0.0, 0.7, 40.0}) {
      CHECK(b_kernel(x, 0, m).value == 0.0);
    }
  }
  SECTION("point mass with drift, by hand: 2 + ([[2]] - 2 [[1]]) = 1") {
    const auto m = one(LevyMeasure1D::point_mass(1.0, 1.0), 1.0);
    CHECK_THAT(b_kernel(2.0, 0, m).value, WithinAbs(1.0, 1e-14));
  }
  SECTION("x = 0 vanishes for any model") {
    const auto m = one(LevyMeasure1D::point_mass(3.0, 2.0), 0.4);
    CHECK(b_kernel(0.0, 0, m).value == 0.0);
  }
  SECTION("asymmetric density agrees with a direct oracle") {
    const auto rho = LevyMeasure1D::custom(
        [](double y) { return y > 0 ? std::pow(y, -1.5) * std::exp(-y) : 0.5 * std::pow(-y, -1.5) * std::exp(y); },
        false, 0.5, kInf);
    const auto m = one(rho, 0.2);
    for (double x : {0.3, 2.5}) {
      const auto integrand = [&](double y) { return truncate(x * y) - x * truncate(y); };
      const auto dens = [&](double y) { return *rho.density(y); };
      const std::vector<double> cuts{1.0, 1.0 / x};
      const double pos = oracle::integrate([&](double y) { return integrand(y) * dens(y); }, 0.0, kInf, cuts);
      const double neg = oracle::integrate([&](double y) { return integrand(-y) * dens(-y); }, 0.0, kInf, cuts);
      CHECK_THAT(b_kernel(x, 0, m).value, WithinRel(0.2 * x + pos + neg, 1e-7));
    }
  }
}

TEST_CASE("k_kernel") {
  CHECK(k_kernel(0.0, 0, one(LevyMeasure1D::stable(1.5, 1.0))).value == 0.0);
  CHECK_THAT(k_kernel(3.0, 0, one(LevyMeasure1D::point_mass(1.0, 1.0))).value, WithinAbs(1.0, 1e-14));

  SECTION("stable closed form 2c(1/(2 - alpha) + 1/alpha)") {
    const auto rho = LevyMeasure1D::stable(1.5, 1.0);
    const double exact = 2.0 * (1.0 / 0.5 + 1.0 / 1.5);
    CHECK_THAT(k_kernel(1.0, 0, one(rho)).value, WithinRel(exact, 1e-8));
    const auto q = integrate_levy(rho, [](double y) { return truncate(y) * truncate(y); }, {1.0});
    CHECK_THAT(q.value, WithinRel(exact, 1e-8));
  }

  SECTION("gaussian part adds x^2 sigma^2") {
    const auto base = k_kernel(0.8, 0, one(LevyMeasure1D::stable(1.2, 1.0))).value;
    const auto with = k_kernel(0.8, 0, one(LevyMeasure1D::stable(1.2, 1.0), 0.0, 2.0)).value;
    CHECK_THAT(with - base, WithinRel(0.64 * 2.0, 1e-12));
  }

  SECTION("tempered closed form matches the oracle") {
    const auto rho = LevyMeasure1D::tempered_stable(1.2, 0.9, 1.7);
    for (double x : {0.01, 0.5, 1.0, 3.0, 200.0}) {
      INFO("x = " << x);
      CHECK_THAT(k_kernel(x, 0, one(rho)).value, WithinRel(k_oracle(1.2, 0.9, 1.7, x), 1e-7));
    }
  }

  SECTION("even in x and nondecreasing in |x|") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> d(0.0, 20.0);
    for (const auto& rho : {LevyMeasure1D::stable(0.7, 1.0), LevyMeasure1D::tempered_stable(1.6, 2.0, 0.5),
                            LevyMeasure1D::point_mass(2.0, 1.0, true)}) {
      const auto m = one(rho);
      for (int i = 0; i < 30; ++i) {
        const double a = d(gen);
        const double b = d(gen);
        CHECK_THAT(k_kernel(-a, 0, m).value, WithinRel(k_kernel(a, 0, m).value, 1e-12));
        const double ka = k_kernel(std::min(a, b), 0, m).value;
        const double kb = k_kernel(std::max(a, b), 0, m).value;
        CHECK(ka <= kb * (1.0 + 1e-9));
      }
    }
  }
}

TEST_CASE("Levy integrability, moments and the mean shift") {
  // Integrands are written as single powers so the oracle never forms
  // inf * 0 near the origin.
  const double a = 1.2;
  const auto ts = LevyMeasure1D::tempered_stable(a, 1.0, 1.0);
  const auto piece = [&](double p) {
    return [a, p](double y) { return std::pow(y, p - a - 1.0) * std::exp(-y); };
  };
  const double integrab = 2.0 * (oracle::integrate(piece(2.0), 0.0, 1.0) + oracle::integrate(piece(0.0), 1.0, kInf));
  CHECK_THAT(levy_integrability(ts).value, WithinRel(integrab, 1e-8));

  // integral of |x|^p rho(dx) = 2c Gamma(p - alpha) lambda^(alpha - p)
  const double mom = 2.0 * oracle::integrate(piece(1.7), 0.0, kInf);
  CHECK_THAT(power_moment(ts, 1.7).value, WithinRel(mom, 1e-8));
  CHECK_THAT(power_moment(ts, 1.25).value, WithinRel(2.0 * std::tgamma(0.05), 1e-12));
  CHECK(power_moment(ts, 1.1).diverged());
  CHECK(power_moment(LevyMeasure1D::stable(1.5, 1.0), 1.7).diverged());

  const double t2 = 2.0 * oracle::integrate(piece(2.0), 0.0, 0.3);
  CHECK_THAT(truncated_second_moment(ts, 0.3).value, WithinRel(t2, 1e-8));

  CHECK(mean_shift(ts).value == 0.0);
  CHECK(mean_shift(LevyMeasure1D::stable(0.8, 1.0)).diverged());
  const auto pm = LevyMeasure1D::point_mass(3.0, 0.5);
  CHECK_THAT(mean_shift(pm).value, WithinRel(0.5 * (3.0 - 1.0), 1e-14));
}

TEST_CASE("upper incomplete gamma for negative and zero order") {
  for (double s : {-1.2, -0.5, 0.0, 0.4, 2.5}) {
    for (double z : {0.05, 1.0, 7.0}) {
      const double ref = oracle::integrate([s](double t) { return std::pow(t, s - 1.0) * std::exp(-t); }, z, kInf);
      INFO("s = " << s << ", z = " << z);
      CHECK_THAT(upper_incomplete_gamma(s, z), WithinRel(ref, 1e-9));
    }
  }
}

TEST_CASE("factories enforce parameter ranges") {
  CHECK_THROWS_AS(LevyMeasure1D::stable(2.0, 1.0), ConfigError);
  CHECK_THROWS_AS(LevyMeasure1D::stable(1.5, 0.0), ConfigError);
  CHECK_THROWS_AS(LevyMeasure1D::tempered_stable(1.5, 1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(LevyMeasure1D::point_mass(0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(LevyMeasure1D::point_mass(1.0, -1.0), ConfigError);
  // x^-3 is not a Levy density: integral of (1 ^ x^2) diverges at 0.
  CHECK_THROWS_AS(LevyMeasure1D::custom([](double x) { return std::pow(std::abs(x), -3.0); }, true), ConfigError);
}

TEST_CASE("model invariants") {
  CHECK_THROWS_AS(ModelSpec({}), ConfigError);
  MixingPoint p;
  p.weight = 0.0;
  CHECK_THROWS_AS(ModelSpec({p}), ConfigError);
  p.weight = 1.0;
  p.gaussian_variance = -1.0;
  CHECK_THROWS_AS(ModelSpec({p}), ConfigError);
  p.gaussian_variance = 0.0;
  MixingPoint q = p;
  q.weight = 2.5;
  const ModelSpec m({p, q});
  CHECK(m.total_weight() == 3.5);
  CHECK(m.point(0).label == "v0");
  CHECK(m.point(1).label == "v1");
  CHECK(m.all_symmetric());
}
