#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>
#include <set>

#include <json.hpp>

#include "idsm/criteria.hpp"
#include "support/oracle.hpp"

using namespace idsm;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ModelSpec stable(double a, double c = 1.0) { return single_point_model(LevyMeasure1D::stable(a, c)); }
ModelSpec tempered(double a, double c = 1.0, double l = 1.0) {
  return single_point_model(LevyMeasure1D::tempered_stable(a, c, l));
}

// f(s) = 2 e^-s: f(0) = 2.
KernelSpec two_exp() {
  SimmaKernel k;
  k.name = "two_exp";
  k.f = [](double s, std::size_t) { return 2.0 * std::exp(-s); };
  k.f0 = [](double, std::size_t) { return 0.0; };
  k.fdot = [](double s, std::size_t) { return -2.0 * std::exp(-s); };
  return KernelSpec(k);
}

KernelSpec constant_kernel() {
  SimmaKernel k;
  k.name = "constant";
  k.f = [](double, std::size_t) { return 1.0; };
  k.f0 = [](double, std::size_t) { return 0.0; };
  k.fdot = [](double, std::size_t) { return 0.0; };
  return KernelSpec(k);
}

double frac_constant(double g) { return std::pow(g, 1.0 / (1.0 - g)) * (1.0 / g + 1.0 / (1.0 - 2.0 * g)); }

}  // namespace

TEST_CASE("drift condition") {
  CHECK(check_drift(stable(1.5), KernelSpec::exp_ma(1.0)).value == 0.0);
  CHECK(check_drift(single_point_model(LevyMeasure1D::point_mass(1.0, 1.0), 1.0), KernelSpec::fractional(0.3)).value ==
        0.0);
  // B(2) for rho = delta_1 and b = 1 equals [[2]] = 1.
  const auto c = check_drift(single_point_model(LevyMeasure1D::point_mass(1.0, 1.0), 1.0), two_exp());
  CHECK(c.finite);
  CHECK_THAT(c.value, WithinAbs(1.0, 1e-14));
}

TEST_CASE("int1: squared derivative against the Gaussian variance") {
  CHECK(check_int1(stable(1.5), KernelSpec::exp_ma(1.0)).value == 0.0);
  const auto gaussian_ma = check_int1(single_point_model(LevyMeasure1D::stable(1.5, 1.0), 0.0, 1.0), KernelSpec::exp_ma(1.0));
  CHECK(gaussian_ma.finite);
  CHECK_THAT(gaussian_ma.value, WithinAbs(0.5, 1e-8));
  const auto frac = check_int1(single_point_model(LevyMeasure1D::stable(1.5, 1.0), 0.0, 1.0), KernelSpec::fractional(0.4));
  CHECK_FALSE(frac.finite);
  CHECK(frac.status == "infinite");
  CHECK(check_int1(stable(1.5), KernelSpec::indicator()).value == 0.0);
  CHECK(check_int1(single_point_model(LevyMeasure1D::stable(1.5, 1.0), 0.0, 1.0), KernelSpec::indicator()).status ==
        "no-derivative");
}

TEST_CASE("Cf") {
  CHECK(stable_cf_constant(1.5, 1.0) == 8.0);
  CHECK_THAT(cf_inner(LevyMeasure1D::stable(1.5, 1.0), 1.0).value, WithinRel(8.0, 1e-12));

  const auto expma = check_Cf(stable(1.5), KernelSpec::exp_ma(1.0));
  CHECK(expma.finite);
  CHECK_THAT(expma.value, WithinRel(16.0 / 3.0, 1e-8));

  CHECK_FALSE(check_Cf(stable(1.5), KernelSpec::fractional(0.3)).finite);
  CHECK(check_Cf(stable(1.5), KernelSpec::indicator()).status == "no-derivative");
}

TEST_CASE("Cf inner integral: closed forms against quadrature") {
  for (double a : {1.1, 1.5, 1.9}) {
    for (double y : {0.01, 0.1, 1.0, 10.0, 100.0}) {
      const auto rho = LevyMeasure1D::stable(a, 0.5);
      const double closed = stable_cf_constant(a, 0.5) * std::pow(y, a);
      CHECK(oracle::rel_err(cf_inner(rho, y, false).value, closed) < 1e-6);
      CHECK(oracle::rel_err(cf_inner(rho, y, true).value, closed) < 1e-12);
    }
  }
  const auto ts = LevyMeasure1D::tempered_stable(1.3, 0.8, 2.0);
  for (double y : {0.01, 1.0, 100.0}) {
    CHECK(oracle::rel_err(cf_inner(ts, y, true).value, cf_inner(ts, y, false).value) < 1e-7);
  }
}

TEST_CASE("fractional time constant against the oracle") {
  for (double g : {0.1, 0.25, 0.4}) {
    for (double x : {0.1, 1.0, 10.0}) {
      const double kink = std::pow(1.0 / (g * x), 1.0 / (g - 1.0));
      const double ref = oracle::integrate(
          [&](double t) {
            const double z = x * g * std::pow(t, g - 1.0);
            return std::min(z, z * z);
          },
          0.0, kInf, {kink});
      const double closed = fractional_time_constant(g) * std::pow(x, 1.0 / (1.0 - g));
      CHECK(oracle::rel_err(closed, ref) < 1e-8);
      CHECK(oracle::rel_err(kernel_time_integral(KernelSpec::fractional(g), 0, x).value, closed) < 1e-6);
    }
  }
}

TEST_CASE("necessity gate") {
  CHECK(check_necessity_gate(stable(1.5)).status == "true");
  CHECK(check_necessity_gate(single_point_model(LevyMeasure1D::point_mass(1.0, 1.0))).status == "false");
  CHECK(check_necessity_gate(single_point_model(LevyMeasure1D::point_mass(1.0, 1.0), 0.0, 1.0)).status == "true");
  CHECK(check_necessity_gate(stable(0.7)).status == "false");
  const auto opaque = LevyMeasure1D::custom([](double x) { return std::exp(-std::abs(x)) / (x * x); }, true);
  CHECK(check_necessity_gate(single_point_model(opaque)).status == "unknown");
}

TEST_CASE("trunc_case") {
  const auto zero = check_trunc_case(stable(1.5), constant_kernel());
  CHECK(zero.finite);
  CHECK(zero.value == 0.0);

  // Stable 1.5 with gamma = 0.4: C(gamma) 2c [1/(p - alpha) + 1/(2 + alpha - p)], p = 5/3.
  const double p = 5.0 / 3.0;
  const double expected = frac_constant(0.4) * 2.0 * (1.0 / (p - 1.5) + 1.0 / (2.0 + 1.5 - p));
  const auto tc = check_trunc_case(stable(1.5), KernelSpec::fractional(0.4));
  CHECK(tc.finite);
  CHECK_THAT(tc.value, WithinRel(expected, 1e-6));
}

TEST_CASE("ratio profiles") {
  SECTION("stable ratio is the constant (2 - alpha)/(alpha - 1)") {
    for (double a : {1.25, 1.5, 1.75}) {
      const double r = (2.0 - a) / (a - 1.0);
      for (bool closed : {true, false}) {
        const auto prof = ratio_profile(LevyMeasure1D::stable(a, 1.0), RatioMode::u00_sup, closed);
        REQUIRE(prof.finite);
        const auto [lo, hi] = std::minmax_element(prof.r.begin(), prof.r.end());
        CHECK(*hi - *lo <= 1e-6 * r);
        CHECK_THAT(prof.value, WithinRel(r, 1e-6));
      }
    }
    CHECK_THAT(check_ratio(stable(1.25), RatioMode::u0_limsup).value, WithinRel(3.0, 1e-9));
  }
  SECTION("tempered tails push r(u) to zero") {
    const auto prof = ratio_profile(LevyMeasure1D::tempered_stable(1.5, 1.0, 1.0), RatioMode::u0_limsup);
    CHECK(prof.finite);
    const std::size_t n = prof.r.size();
    for (std::size_t i = n - 5; i + 1 < n; ++i) {
      CHECK(prof.r[i + 1] <= prof.r[i]);
    }
    CHECK(prof.r.back() < 1e-100);
  }
  SECTION("heavy tails make the numerator infinite") {
    CHECK_FALSE(check_ratio(stable(0.8), RatioMode::u00_sup).finite);
  }
}

TEST_CASE("verdict examples") {
  const auto semi = verdict(tempered(1.2), KernelSpec::fractional(0.2));
  CHECK(semi.verdict == Verdict::semimartingale);

  for (double a : {1.1, 1.5, 1.9}) {
    for (double g : {0.05, 0.2, 0.45}) {
      CHECK(verdict(stable(a), KernelSpec::fractional(g)).verdict == Verdict::not_semimartingale);
    }
  }

  const auto ma = verdict(stable(1.5), KernelSpec::exp_ma(1.0));
  CHECK(ma.verdict == Verdict::semimartingale);
  REQUIRE(ma.find("Cf") != nullptr);
  // C = 8 times the integral of |fdot|^1.5 = 2/3.
  CHECK_THAT(ma.find("Cf")->value, WithinRel(8.0 * 2.0 / 3.0, 1e-8));

  const auto gamma06 = verdict(tempered(1.5), KernelSpec::fractional(0.6));
  CHECK(gamma06.verdict == Verdict::not_semimartingale);
  bool cites_range = false;
  for (const auto& r : gamma06.reasons) {
    cites_range = cites_range || r.find("(0, 1/2)") != std::string::npos;
  }
  CHECK(cites_range);

  CHECK(verdict(stable(1.5), KernelSpec::indicator()).verdict == Verdict::not_semimartingale);
  CHECK(verdict(single_point_model(LevyMeasure1D::point_mass(1.0, 1.0, true)), KernelSpec::indicator()).verdict ==
        Verdict::inconclusive);
}

TEST_CASE("Gaussian instances") {
  const auto gaussian_ma = verdict(single_point_model(LevyMeasure1D::tempered_stable(1.5, 1.0, 1.0), 0.0, 1.0), KernelSpec::exp_ma(1.0));
  CHECK(gaussian_ma.verdict == Verdict::semimartingale);
  CHECK_THAT(gaussian_ma.find("int1")->value, WithinAbs(0.5, 1e-8));
  const auto frac = verdict(single_point_model(LevyMeasure1D::stable(1.5, 1.0), 0.0, 1.0), KernelSpec::fractional(0.4));
  CHECK(frac.verdict == Verdict::not_semimartingale);
  CHECK_FALSE(frac.find("int1")->finite);
}

TEST_CASE("fractional over tempered: the verdict flips once, at 1 - 1/alpha") {
  for (double a : {1.2, 1.5, 1.8}) {
    const double critical = 1.0 - 1.0 / a;
    int flips = 0;
    Verdict last = Verdict::inconclusive;
    for (double g = 0.02; g < 0.5; g += 0.04) {
      if (std::abs(g - critical) < 1e-3) {
        continue;
      }
      const Verdict v = verdict(tempered(a), KernelSpec::fractional(g)).verdict;
      CHECK(v == (g > critical ? Verdict::semimartingale : Verdict::not_semimartingale));
      if (g > 0.03 && v != last) {
        ++flips;
      }
      last = v;
    }
    CHECK(flips <= 1);
  }
}

TEST_CASE("square-integrable drivers: closed-form rule, general path and int1 + Cf agree") {
  std::mt19937_64 gen(4242);
  std::uniform_real_distribution<double> alpha(1.05, 1.95);
  std::uniform_real_distribution<double> theta(0.2, 4.0);
  std::uniform_real_distribution<double> gam(0.05, 0.45);
  for (int i = 0; i < 10; ++i) {
    const double a = alpha(gen);
    const auto model = tempered(a, 1.0, 1.0 + i * 0.1);
    const KernelSpec kernel = (i % 2 == 0) ? KernelSpec::exp_ma(theta(gen)) : KernelSpec::fractional(gam(gen));
    if (const auto* f = kernel.as_fractional(); f != nullptr && std::abs(f->gamma[0] - (1.0 - 1.0 / a)) < 0.02) {
      continue;
    }
    const auto rule = verdict(model, kernel, {true});
    const auto general = verdict(model, kernel, {false});
    const bool both = check_int1(model, kernel).finite && check_Cf(model, kernel).finite;
    INFO("alpha = " << a << ", kernel " << kernel.family_name());
    CHECK(rule.verdict == general.verdict);
    CHECK((general.verdict == Verdict::semimartingale) == both);
  }
}

TEST_CASE("a Semimartingale verdict never coexists with a violated necessary clause") {
  const std::vector<std::pair<ModelSpec, KernelSpec>> cases{
      {tempered(1.2), KernelSpec::fractional(0.2)},
      {stable(1.5), KernelSpec::exp_ma(2.0)},
      {tempered(1.7), KernelSpec::exp_ma(0.5)},
      {single_point_model(LevyMeasure1D::point_mass(1.0, 1.0, true), 0.0, 1.0), KernelSpec::exp_ma(1.0)},
  };
  for (const auto& [model, kernel] : cases) {
    for (bool rules : {true, false}) {
      const auto r = verdict(model, kernel, {rules});
      if (r.verdict != Verdict::semimartingale) {
        continue;
      }
      const auto* gate = r.find("invar_con");
      for (const auto& c : r.conditions) {
        if (c.role == ConditionRole::necessary && gate != nullptr && gate->status == "true") {
          CHECK(c.finite);
        }
      }
    }
  }
}

TEST_CASE("special semimartingale clause") {
  const auto r = verdict(tempered(1.2), KernelSpec::exp_ma(1.0));
  REQUIRE(r.verdict == Verdict::semimartingale);
  CHECK(r.special.evaluated);
  CHECK(r.special.special);
  CHECK(r.special.expected_drift == 0.0);

  // Fractional kernels have f(0) = 0, so M = 0 and the clause holds trivially.
  const auto frac = verdict(tempered(1.2), KernelSpec::fractional(0.3));
  REQUIRE(frac.verdict == Verdict::semimartingale);
  CHECK(frac.special.special);

  const auto not_semi = verdict(stable(1.5), KernelSpec::fractional(0.3));
  CHECK_FALSE(not_semi.special.evaluated);
}

TEST_CASE("report JSON has a fixed schema") {
  const auto r = verdict(tempered(1.2), KernelSpec::fractional(0.2));
  const auto doc = nlohmann::json::parse(report_to_json(r));
  CHECK(doc.at("verdict") == "Semimartingale");
  REQUIRE(doc.at("conditions").is_array());
  for (const auto& c : doc.at("conditions")) {
    CHECK(c.contains("id"));
    CHECK(c.contains("role"));
    CHECK(c.contains("value"));
    CHECK(c.contains("finite"));
    CHECK(c.contains("status"));
  }
  CHECK(doc.at("reasons").is_array());
  CHECK(doc.at("special").contains("flag"));
  const std::set<std::string> vocabulary{"drift4", "int1", "Cf", "invar_con", "trunc_case",
                                         "u0", "u00", "fdot_int", "special_semimartingale"};
  for (const auto& rep : {r, verdict(stable(1.5), KernelSpec::fractional(0.3), {false}),
                          verdict(single_point_model(LevyMeasure1D::point_mass(1.0, 1.0, true)), KernelSpec::indicator())}) {
    for (const auto& c : rep.conditions) {
      CHECK(vocabulary.count(c.id) == 1);
    }
  }
}
