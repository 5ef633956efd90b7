#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "idsm/errors.hpp"
#include "idsm/kernels.hpp"

using namespace idsm;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<KernelSpec> sample_kernels() {
  SimmaKernel custom;
  custom.name = "ramp";
  custom.f = [](double s, std::size_t) { return s < 2.0 ? 1.0 + 0.5 * s : 2.0 * std::exp(2.0 - s); };
  custom.f0 = [](double s, std::size_t) { return std::exp(-s); };
  custom.fdot = [](double s, std::size_t) { return s < 2.0 ? 0.5 : -2.0 * std::exp(2.0 - s); };
  custom.breakpoints = {2.0};
  return {KernelSpec::fractional(0.3), KernelSpec::exp_ma(1.7), KernelSpec::indicator(0.0, 1.0),
          KernelSpec(IndicatorKernel{0.5, 2.0, true}), KernelSpec(custom)};
}

}  // namespace

TEST_CASE("phi examples") {
  CHECK_THAT(KernelSpec::fractional(0.4).phi(1.0, 0.5, 0), WithinRel(std::pow(0.5, 0.4), 1e-15));
  CHECK_THAT(KernelSpec::fractional(0.4).phi(1.0, 0.5, 0), WithinRel(0.757858, 1e-6));
  const auto e = KernelSpec::exp_ma(1.0);
  for (double t : {-3.0, 0.0, 0.25, 9.0}) {
    CHECK(e.phi(t, t, 0) == 1.0);
    CHECK(e.diag(t, 0) == 1.0);
  }
}

TEST_CASE("causality: phi vanishes for s > t") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> d(-20.0, 20.0);
  for (const auto& k : sample_kernels()) {
    for (int i = 0; i < 400; ++i) {
      double t = d(gen);
      double s = d(gen);
      if (s <= t) {
        std::swap(s, t);
      }
      if (s == t) {
        continue;
      }
      if (k.f0(-s, 0) == 0.0) {
        CHECK(k.phi(t, s, 0) == 0.0);
      } else {
        CHECK(k.f(t - s, 0) == 0.0);
      }
    }
  }
  GeneralPhiKernel gp{[](double t, double s, std::size_t) { return std::exp(-(t - s)); },
                      [](double, std::size_t) { return 1.0; }};
  CHECK(KernelSpec(gp).phi(0.0, 1.0, 0) == 0.0);
}

TEST_CASE("fdot examples") {
  CHECK_THAT(*KernelSpec::fractional(0.25).fdot(4.0, 0), WithinRel(0.25 * std::pow(4.0, -0.75), 1e-15));
  CHECK_THAT(*KernelSpec::fractional(0.25).fdot(4.0, 0), WithinRel(0.088388, 1e-5));
  CHECK_THAT(*KernelSpec::exp_ma(2.0).fdot(1.0, 0), WithinRel(-2.0 * std::exp(-2.0), 1e-15));
  CHECK_THAT(*KernelSpec::exp_ma(2.0).fdot(1.0, 0), WithinRel(-0.270671, 1e-5));
  const auto ind = KernelSpec::indicator(0.0, 1.0);
  CHECK_FALSE(ind.has_derivative());
  CHECK_FALSE(ind.fdot(0.5, 0).has_value());
  CHECK_THROWS_AS(KernelSpec::exp_ma(1.0).fdot(0.0, 0), ConfigError);
}

TEST_CASE("g-split") {
  SECTION("fractional: no jump, g = f") {
    const auto k = KernelSpec::fractional(0.3);
    const auto split = g_split(k, 1);
    CHECK(split.jump_height[0] == 0.0);
    for (double s : {-1.0, 0.0, 0.5, 4.0}) {
      CHECK(split.g(s, 0) == k.f(s, 0));
    }
  }
  SECTION("exp_ma: jump 1, g(s) = exp(-s) - 1 on s >= 0") {
    const auto split = g_split(KernelSpec::exp_ma(1.0), 1);
    CHECK(split.jump_height[0] == 1.0);
    for (double s : {0.0, 0.3, 2.0}) {
      CHECK_THAT(split.g(s, 0), WithinAbs(std::exp(-s) - 1.0, 1e-15));
    }
    CHECK(split.g(-0.5, 0) == 0.0);
  }
  SECTION("indicator: g = 1_[0,1) - 1_[0,inf)") {
    const auto split = g_split(KernelSpec::indicator(0.0, 1.0), 1);
    CHECK(split.jump_height[0] == 1.0);
    CHECK(split.g(0.5, 0) == 0.0);
    CHECK(split.g(1.5, 0) == -1.0);
    CHECK(split.g(-0.5, 0) == 0.0);
  }
  SECTION("general phi has no split") {
    GeneralPhiKernel gp{[](double, double, std::size_t) { return 1.0; },
                        [](double, std::size_t) { return 1.0; }};
    CHECK_THROWS_AS(g_split(KernelSpec(gp), 1), UnsupportedError);
  }
}

TEST_CASE("phi(t, s) = g(t - s) - g(-s) + f(0) 1{0 < s <= t}") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> d(-6.0, 6.0);
  for (const auto& k : sample_kernels()) {
    if (k.f0(0.5, 0) != k.f(0.5, 0) && k.f0(0.5, 0) != 0.0) {
      // f0 unrelated to f: the identity is stated for f0 in {0, f}.
      continue;
    }
    for (int i = 0; i < 300; ++i) {
      const double t = std::abs(d(gen));
      const double s = d(gen);
      const double ind = (s > 0.0 && s <= t) ? 1.0 : 0.0;
      double rhs = k.g(t - s, 0) - k.g(-s, 0) + k.jump_height(0) * ind;
      if (k.f0(-s, 0) == 0.0 && k.f(-s, 0) != 0.0) {
        // f0 = 0 kernels keep f(-s) in phi.
        rhs += k.f(-s, 0);
      }
      INFO(k.family_name() << " t = " << t << ", s = " << s);
      CHECK_THAT(k.phi(t, s, 0), WithinAbs(rhs, 1e-12));
    }
  }
}

TEST_CASE("declared derivatives satisfy the fundamental theorem") {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> d(0.01, 8.0);
  for (const auto& k : sample_kernels()) {
    if (!k.has_derivative()) {
      CHECK_THROWS_AS(derivative_mismatch(k, 0, 0.1, 1.0), UnsupportedError);
      continue;
    }
    for (int i = 0; i < 20; ++i) {
      double a = d(gen);
      double b = d(gen);
      if (a > b) {
        std::swap(a, b);
      }
      CHECK(derivative_mismatch(k, 0, a, b) < 1e-8);
    }
  }
}

TEST_CASE("cadlag spot check: right limits equal values") {
  // t^0.3 is only Hoelder at 0, so the right gap is measured at 1e-40.
  for (const auto& k : sample_kernels()) {
    for (double s : {0.0, 0.5, 1.0, 2.0, 3.0}) {
      const double right = s == 0.0 ? 1e-40 : s * (1.0 + 1e-15);
      CHECK_THAT(k.f(right, 0), WithinAbs(k.f(s, 0), 1e-9));
    }
  }
}

TEST_CASE("per-point parameters and warnings") {
  const KernelSpec k(FractionalKernel{{0.1, 0.3}});
  CHECK(k.gamma(1) == 0.3);
  CHECK_NOTHROW(k.validate_for(2));
  CHECK_THROWS_AS(k.validate_for(3), ConfigError);
  CHECK(KernelSpec::fractional(0.2).warnings().empty());
  CHECK(KernelSpec::fractional(1.3).warnings().size() == 1);
  CHECK_THROWS_AS(KernelSpec::fractional(0.0), ConfigError);
  CHECK_THROWS_AS(KernelSpec::exp_ma(-1.0), ConfigError);
  CHECK_THROWS_AS(KernelSpec::indicator(1.0, 0.5), ConfigError);
  CHECK_THROWS_AS(KernelSpec::exp_ma(1.0).gamma(0), UnsupportedError);
}

TEST_CASE("level crossings of |fdot| are exact") {
  const auto f = KernelSpec::fractional(0.3);
  for (double level : {0.01, 1.0, 50.0}) {
    const auto c = f.fdot_level_crossings(level, 0);
    REQUIRE(c.size() == 1);
    CHECK_THAT(std::abs(*f.fdot(c[0], 0)), WithinRel(level, 1e-12));
  }
  const auto e = KernelSpec::exp_ma(2.0);
  CHECK(e.fdot_level_crossings(3.0, 0).empty());
  const auto c = e.fdot_level_crossings(0.5, 0);
  REQUIRE(c.size() == 1);
  CHECK_THAT(std::abs(*e.fdot(c[0], 0)), WithinRel(0.5, 1e-12));
}
