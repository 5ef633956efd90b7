#include "idsm/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "idsm/errors.hpp"

namespace idsm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

QuadResult exact(double value) {
  QuadResult r;
  r.value = value;
  return r;
}

QuadResult divergent() {
  QuadResult r;
  r.value = kInf;
  r.status = QuadStatus::diverged;
  return r;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// Integral over (p, q) of x^k exp(-lambda x); lambda = 0 is the pure power.
double power_exp_integral(double k, double lambda, double p, double q) {
  if (!(q > p)) {
    return 0.0;
  }
  const double s = k + 1.0;
  if (lambda == 0.0) {
    if (p == 0.0 && s <= 0.0) {
      return kInf;
    }
    if (std::isinf(q)) {
      return s < 0.0 ? -std::pow(p, s) / s : kInf;
    }
    if (s == 0.0) {
      return std::log(q / p);
    }
    return (std::pow(q, s) - (p == 0.0 ? 0.0 : std::pow(p, s))) / s;
  }
  const double scale = std::pow(lambda, -s);
  if (p == 0.0) {
    if (s <= 0.0) {
      return kInf;
    }
    if (std::isinf(q)) {
      return scale * std::tgamma(s);
    }
    return scale * boost::math::tgamma_lower(s, lambda * q);
  }
  const double upper_q = std::isinf(q) ? 0.0 : upper_incomplete_gamma(s, lambda * q);
  return scale * (upper_incomplete_gamma(s, lambda * p) - upper_q);
}

// (c, alpha, lambda) of a stable (lambda = 0) or tempered stable measure.
struct PowerLaw {
  double c;
  double alpha;
  double lambda;
};

std::optional<PowerLaw> power_law(const LevyMeasure1D& rho) {
  if (const auto* st = rho.as_stable()) {
    return PowerLaw{st->c, st->alpha, 0.0};
  }
  if (const auto* ts = rho.as_tempered()) {
    return PowerLaw{ts->c, ts->alpha, ts->lambda};
  }
  return std::nullopt;
}

QuadResult finite_or_divergent(double value) {
  return std::isfinite(value) ? exact(value) : divergent();
}

// Integral of (|xy| ^ |xy|^2)(1 ^ x^-2) rho(dx).
QuadResult trunc_inner(const LevyMeasure1D& rho, double y, const QuadratureConfig& config) {
  const double ay = std::abs(y);
  if (ay == 0.0) {
    return exact(0.0);
  }
  if (const auto law = power_law(rho)) {
    const double a = 1.0 / ay;
    const double al = law->alpha;
    const double l = law->lambda;
    double sum = y * y * power_exp_integral(1.0 - al, l, 0.0, std::min(a, 1.0));
    if (a < 1.0) {
      sum += ay * power_exp_integral(-al, l, a, 1.0);
    } else {
      sum += y * y * power_exp_integral(-al - 1.0, l, 1.0, a);
    }
    sum += ay * power_exp_integral(-al - 2.0, l, std::max(a, 1.0), kInf);
    return finite_or_divergent(2.0 * law->c * sum);
  }
  return integrate_levy(
      rho,
      [ay](double x) {
        const double z = std::abs(x) * ay;
        return std::min(z, z * z) * std::min(1.0, 1.0 / (x * x));
      },
      {1.0 / ay}, config);
}

ConditionResult make(const std::string& id, ConditionRole role, const QuadResult& r,
                     const std::string& note = {}) {
  ConditionResult c;
  c.id = id;
  c.role = role;
  c.value = r.value;
  c.finite = r.converged();
  c.status = r.converged() ? "finite" : (r.diverged() ? "infinite" : "unknown");
  c.note = note;
  return c;
}

ConditionResult no_derivative(const std::string& id, ConditionRole role) {
  ConditionResult c;
  c.id = id;
  c.role = role;
  c.value = kInf;
  c.finite = false;
  c.status = "no-derivative";
  c.note = "the kernel declares no derivative of f";
  return c;
}

// Integral over s in (0, inf) of h(fdot(s, v)).
QuadResult fdot_integral(const KernelSpec& kernel, std::size_t v,
                         const std::function<double(double)>& h, const std::vector<double>& extra,
                         const QuadratureConfig& config) {
  std::vector<double> cuts = kernel.breakpoints(v);
  cuts.insert(cuts.end(), extra.begin(), extra.end());
  for (double t : kernel.fdot_level_crossings(1.0, v)) {
    cuts.push_back(t);
  }
  return integrate([&](double s) { return h(*kernel.fdot(s, v)); }, 0.0, kInf,
                   config.with_splits(cuts));
}

std::vector<double> atom_kinks(const KernelSpec& kernel, const LevyMeasure1D& rho, std::size_t v) {
  if (const auto* pm = rho.as_point_mass()) {
    return kernel.fdot_level_crossings(1.0 / std::abs(pm->position), v);
  }
  return {};
}

// Per-v integral over s of inner(fdot(s, v)); `inner` may diverge for every y != 0.
QuadResult outer_integral(const KernelSpec& kernel, std::size_t v, const LevyMeasure1D& rho,
                          const std::function<QuadResult(double)>& inner,
                          const QuadratureConfig& config) {
  const QuadResult probe = inner(1.0);
  if (probe.diverged()) {
    return divergent();
  }
  return fdot_integral(
      kernel, v,
      [&](double y) {
        const QuadResult r = inner(y);
        if (r.diverged()) {
          throw NumericError("inner Levy integral diverged at fdot = " + fmt(y));
        }
        return r.value;
      },
      atom_kinks(kernel, rho, v), config);
}

ConditionResult per_point_sum(const std::string& id, ConditionRole role, const ModelSpec& model,
                              const std::function<QuadResult(std::size_t)>& term, bool weighted,
                              const std::string& note = {}) {
  QuadResult total;
  std::vector<std::pair<std::string, double>> per_label;
  for (std::size_t v = 0; v < model.size(); ++v) {
    const QuadResult r = term(v);
    per_label.emplace_back(model.point(v).label, r.value);
    total += weighted ? scaled(r, model.point(v).weight) : r;
  }
  ConditionResult c = make(id, role, total, note);
  c.per_label = std::move(per_label);
  return c;
}

}  // namespace

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::semimartingale:
      return "Semimartingale";
    case Verdict::not_semimartingale:
      return "NotSemimartingale";
    default:
      return "Inconclusive";
  }
}

std::string to_string(ConditionRole role) {
  switch (role) {
    case ConditionRole::sufficient:
      return "sufficient";
    case ConditionRole::necessary:
      return "necessary";
    case ConditionRole::gate:
      return "gate";
    default:
      return "info";
  }
}

const ConditionResult* VerdictReport::find(const std::string& id) const {
  for (const auto& c : conditions) {
    if (c.id == id) {
      return &c;
    }
  }
  return nullptr;
}

double stable_cf_constant(double alpha, double c) {
  return 2.0 * c * (1.0 / (2.0 - alpha) + 1.0 / (alpha - 1.0));
}

double fractional_time_constant(double gamma) {
  return std::pow(gamma, 1.0 / (1.0 - gamma)) * (1.0 / gamma + 1.0 / (1.0 - 2.0 * gamma));
}

QuadResult cf_inner(const LevyMeasure1D& rho, double y, bool closed_form,
                    const QuadratureConfig& config) {
  const double ay = std::abs(y);
  if (ay == 0.0) {
    return exact(0.0);
  }
  if (closed_form) {
    if (const auto law = power_law(rho)) {
      if (law->lambda == 0.0) {
        if (law->alpha <= 1.0) {
          return divergent();
        }
        return exact(stable_cf_constant(law->alpha, law->c) * std::pow(ay, law->alpha));
      }
      const double a = 1.0 / ay;
      const double sum = y * y * power_exp_integral(1.0 - law->alpha, law->lambda, 0.0, a) +
                         ay * power_exp_integral(-law->alpha, law->lambda, a, kInf);
      return finite_or_divergent(2.0 * law->c * sum);
    }
  }
  return integrate_levy(
      rho,
      [ay](double x) {
        const double z = std::abs(x) * ay;
        return std::min(z, z * z);
      },
      {1.0 / ay}, config);
}

QuadResult kernel_time_integral(const KernelSpec& kernel, std::size_t v, double x,
                                const QuadratureConfig& config) {
  if (!kernel.has_derivative()) {
    throw UnsupportedError("kernel_time_integral: the kernel declares no derivative");
  }
  const double ax = std::abs(x);
  if (ax == 0.0) {
    return exact(0.0);
  }
  return fdot_integral(
      kernel, v,
      [ax](double y) {
        const double z = ax * std::abs(y);
        return std::min(z, z * z);
      },
      kernel.fdot_level_crossings(1.0 / ax, v), config);
}

ConditionResult check_drift(const ModelSpec& model, const KernelSpec& kernel,
                            const QuadratureConfig& config) {
  if (!kernel.is_simma()) {
    ConditionResult c;
    c.id = "drift4";
    c.role = ConditionRole::sufficient;
    c.value = kInf;
    c.finite = false;
    c.status = "not-applicable";
    c.note = "needs a kernel of the form f(t - s) - f0(-s)";
    return c;
  }
  return per_point_sum(
      "drift4", ConditionRole::sufficient, model,
      [&](std::size_t v) {
        QuadResult b = b_kernel(kernel.jump_height(v), v, model, config);
        b.value = std::abs(b.value);
        return b;
      },
      true, "sum of m(v) |B(f(0, v), v)|");
}

ConditionResult check_int1(const ModelSpec& model, const KernelSpec& kernel,
                           const QuadratureConfig& config) {
  bool any_gaussian = false;
  for (const auto& p : model.points()) {
    any_gaussian = any_gaussian || p.gaussian_variance > 0.0;
  }
  if (!any_gaussian) {
    ConditionResult c = make("int1", ConditionRole::sufficient, exact(0.0), "sigma^2 = 0 everywhere");
    for (const auto& p : model.points()) {
      c.per_label.emplace_back(p.label, 0.0);
    }
    return c;
  }
  if (!kernel.has_derivative()) {
    return no_derivative("int1", ConditionRole::sufficient);
  }
  return per_point_sum(
      "int1", ConditionRole::sufficient, model,
      [&](std::size_t v) {
        const double s2 = model.point(v).gaussian_variance;
        if (s2 == 0.0) {
          return exact(0.0);
        }
        return scaled(fdot_integral(kernel, v, [](double y) { return y * y; }, {}, config), s2);
      },
      true, "sum of m(v) sigma^2(v) * integral of fdot^2");
}

ConditionResult check_Cf(const ModelSpec& model, const KernelSpec& kernel,
                         const QuadratureConfig& config) {
  if (!kernel.has_derivative()) {
    return no_derivative("Cf", ConditionRole::sufficient);
  }
  return per_point_sum(
      "Cf", ConditionRole::sufficient, model,
      [&](std::size_t v) {
        const auto& rho = model.point(v).levy;
        return outer_integral(
            kernel, v, rho, [&](double y) { return cf_inner(rho, y, true, config); }, config);
      },
      true);
}

ConditionResult check_fdot_int(const ModelSpec& model, const KernelSpec& kernel,
                               const QuadratureConfig& config) {
  ConditionResult c = check_Cf(model, kernel, config);
  c.id = "fdot_int";
  c.role = ConditionRole::necessary;
  c.note = "per-point integral of (|x fdot|^2 ^ |x fdot|); unweighted";
  if (c.status == "no-derivative") {
    return c;
  }
  double worst = 0.0;
  for (const auto& [label, value] : c.per_label) {
    worst = std::max(worst, value);
  }
  c.value = worst;
  return c;
}

ConditionResult check_trunc_case(const ModelSpec& model, const KernelSpec& kernel,
                                 const QuadratureConfig& config) {
  if (!kernel.has_derivative()) {
    return no_derivative("trunc_case", ConditionRole::necessary);
  }
  ConditionResult c = per_point_sum(
      "trunc_case", ConditionRole::necessary, model,
      [&](std::size_t v) {
        const auto& rho = model.point(v).levy;
        return outer_integral(
            kernel, v, rho, [&](double y) { return trunc_inner(rho, y, config); }, config);
      },
      false, "per-point integral of (|x fdot| ^ |x fdot|^2)(1 ^ x^-2)");
  double worst = 0.0;
  for (const auto& [label, value] : c.per_label) {
    worst = std::max(worst, value);
  }
  c.value = worst;
  return c;
}

ConditionResult check_necessity_gate(const ModelSpec& model, const QuadratureConfig& config) {
  (void)config;
  ConditionResult c;
  c.id = "invar_con";
  c.role = ConditionRole::gate;
  bool all_true = true;
  bool any_false = false;
  for (const auto& p : model.points()) {
    double flag = 0.0;
    if (p.gaussian_variance > 0.0) {
      flag = 1.0;
    } else if (const auto beta = p.levy.small_jump_index()) {
      flag = *beta >= 1.0 ? 1.0 : 0.0;
    } else {
      flag = std::numeric_limits<double>::quiet_NaN();
    }
    c.per_label.emplace_back(p.label, flag);
    if (std::isnan(flag)) {
      all_true = false;
    } else if (flag == 0.0) {
      all_true = false;
      any_false = true;
    }
  }
  if (all_true) {
    c.status = "true";
    c.value = 1.0;
  } else if (any_false) {
    c.status = "false";
    c.value = 0.0;
  } else {
    c.status = "unknown";
    c.value = std::numeric_limits<double>::quiet_NaN();
    c.note = "a custom measure without a declared small-jump index";
  }
  c.finite = true;
  return c;
}

RatioProfile ratio_profile(const LevyMeasure1D& rho, RatioMode mode, bool closed_form,
                           double u_min, double u_max, int points,
                           const QuadratureConfig& config) {
  if (!(u_min > 0.0 && u_max > u_min && points >= 2)) {
    throw ConfigError("ratio_profile: need 0 < u_min < u_max and at least two points");
  }
  RatioProfile prof;
  const auto law = power_law(rho);
  for (int i = 0; i < points; ++i) {
    const double u = u_min * std::pow(u_max / u_min, static_cast<double>(i) / (points - 1));
    double num = 0.0;
    double den = 0.0;
    if (closed_form && law) {
      num = u * 2.0 * law->c * power_exp_integral(-law->alpha, law->lambda, u, kInf);
      den = 2.0 * law->c * power_exp_integral(1.0 - law->alpha, law->lambda, 0.0, u);
    } else {
      const QuadResult n =
          integrate_levy_band(rho, [](double x) { return std::abs(x); }, u, kInf, {u}, config);
      const QuadResult d =
          integrate_levy_band(rho, [](double x) { return x * x; }, 0.0, u, {u}, config);
      num = n.diverged() ? kInf : u * n.value;
      den = d.value;
    }
    const double r = (den > 0.0) ? num / den : kInf;
    prof.u.push_back(u);
    prof.r.push_back(r);
  }

  std::size_t first = 0;
  if (mode == RatioMode::u0_limsup) {
    const double start = u_max / 10.0;
    while (first + 1 < prof.u.size() && prof.u[first] < start * (1.0 - 1e-12)) {
      ++first;
    }
  }
  prof.value = 0.0;
  prof.finite = true;
  for (std::size_t i = first; i < prof.r.size(); ++i) {
    prof.value = std::max(prof.value, prof.r[i]);
    prof.finite = prof.finite && std::isfinite(prof.r[i]);
  }
  if (mode == RatioMode::u0_limsup && prof.finite) {
    const double head = prof.r[first];
    const double tail = prof.r.back();
    if (tail > 2.0 * head && tail > 0.0) {
      prof.finite = false;
      prof.note = "r(u) still increasing over the top decade; limsup treated as infinite";
    } else {
      prof.note = "limsup approximated by the max over the top decade";
    }
  }
  return prof;
}

ConditionResult check_ratio(const ModelSpec& model, RatioMode mode,
                            const QuadratureConfig& config) {
  ConditionResult c;
  c.id = mode == RatioMode::u0_limsup ? "u0" : "u00";
  c.role = ConditionRole::necessary;
  c.value = 0.0;
  c.finite = true;
  for (std::size_t v = 0; v < model.size(); ++v) {
    const RatioProfile prof = ratio_profile(model.point(v).levy, mode, true, 1e-4, 1e4, 33, config);
    c.per_label.emplace_back(model.point(v).label, prof.value);
    if (v == 0 || prof.value > c.value || !prof.finite) {
      c.profile.clear();
      for (std::size_t i = 0; i < prof.u.size(); ++i) {
        c.profile.emplace_back(prof.u[i], prof.r[i]);
      }
      c.note = prof.note;
    }
    c.value = std::max(c.value, prof.value);
    c.finite = c.finite && prof.finite;
  }
  c.status = c.finite ? "finite" : "infinite";
  return c;
}

namespace {

struct Evaluation {
  const ModelSpec& model;
  const KernelSpec& kernel;
  const QuadratureConfig& config;
  VerdictReport report;

  void add(ConditionResult c) { report.conditions.push_back(std::move(c)); }
  void reason(std::string r) { report.reasons.push_back(std::move(r)); }

  bool fractional_rule() {
    if (kernel.as_fractional() == nullptr) {
      return false;
    }
    const bool single = model.size() == 1;
    reason(single ? "fractional kernel: closed-form iff rule (sigma^2 = 0, gamma in (0, 1/2), "
                    "integral of |x|^(1/(1-gamma)) rho finite)"
                  : "superposition of fractional kernels: closed-form rule");
    ConditionResult drift = make("drift4", ConditionRole::sufficient, exact(0.0), "f(0, v) = 0");
    add(drift);
    const ConditionResult gate = check_necessity_gate(model, config);
    add(gate);

    bool gamma_ok = true;
    bool gaussian = false;
    QuadResult cf_total;
    QuadResult superposition;
    ConditionResult cf;
    cf.id = "Cf";
    cf.role = ConditionRole::sufficient;
    cf.note = "C(gamma) * integral of |x|^(1/(1-gamma)) rho(dx)";
    for (std::size_t v = 0; v < model.size(); ++v) {
      const auto& p = model.point(v);
      const double gm = kernel.gamma(v);
      gaussian = gaussian || p.gaussian_variance > 0.0;
      if (!(gm > 0.0 && gm < 0.5)) {
        gamma_ok = false;
        reason("gamma(" + p.label + ") = " + fmt(gm) +
               " lies outside (0, 1/2): a fractional process with such an exponent is not a "
               "semimartingale (and is not well defined for a non-deterministic driver)");
        cf.per_label.emplace_back(p.label, kInf);
        cf_total += divergent();
        superposition += divergent();
        continue;
      }
      const QuadResult moment = power_moment(p.levy, 1.0 / (1.0 - gm), config);
      const QuadResult term = scaled(moment, fractional_time_constant(gm));
      cf.per_label.emplace_back(p.label, term.value);
      cf_total += scaled(term, p.weight);
      superposition += scaled(moment, p.weight / (0.5 - gm));
      if (!moment.converged()) {
        reason("integral of |x|^" + fmt(1.0 / (1.0 - gm)) + " rho_" + p.label + "(dx) is infinite");
      }
    }
    cf.value = cf_total.value;
    cf.finite = cf_total.converged();
    cf.status = cf.finite ? "finite" : "infinite";
    if (!single) {
      cf.note += "; sum of m(v) (1/2 - gamma(v))^-1 integral of |x|^(1/(1-gamma)) rho_v = " +
                 fmt(superposition.value);
    }
    add(cf);

    ConditionResult int1 = make("int1", ConditionRole::sufficient, exact(0.0));
    if (gaussian) {
      int1 = make("int1", ConditionRole::sufficient, divergent(),
                  "integral of (gamma t^(gamma-1))^2 diverges for every gamma");
      reason("sigma^2 > 0: the Gaussian part of a fractional process is never a semimartingale");
    }
    add(int1);

    if (!gamma_ok) {
      report.verdict = Verdict::not_semimartingale;
      return true;
    }
    if (single) {
      report.verdict = (!gaussian && cf.finite) ? Verdict::semimartingale : Verdict::not_semimartingale;
      return true;
    }
    if (!gaussian && superposition.converged()) {
      report.verdict = Verdict::semimartingale;
      reason("superposition sum is finite");
    } else if (gate.status == "true") {
      report.verdict = Verdict::not_semimartingale;
      reason("every point has infinite-variation small jumps, so sigma^2 = 0 and finite moments "
             "are necessary");
    } else {
      report.verdict = Verdict::inconclusive;
      reason("sufficient condition fails and the necessity gate does not hold at every point");
    }
    return true;
  }

  bool stable_rule() {
    bool all_stable = true;
    bool low_index = false;
    for (const auto& p : model.points()) {
      const auto* st = p.levy.as_stable();
      if (st == nullptr || p.gaussian_variance != 0.0 || p.drift != 0.0) {
        all_stable = false;
        continue;
      }
      if (st->alpha < 1.0) {
        low_index = true;
      }
      if (st->alpha <= 1.0) {
        all_stable = false;
      }
    }
    if (low_index) {
      reason("stable index below 1: the driver has finite variation, so X is a semimartingale "
             "iff it has finite variation; falling back to the general theorems");
    }
    if (!all_stable) {
      return false;
    }
    reason(model.size() == 1
               ? "symmetric stable driver with alpha in (1, 2): X is a semimartingale iff "
                 "integral of |fdot|^alpha is finite"
               : "multi-stable driver with alpha(v) > 1: weighted |fdot|^alpha rule");
    add(make("drift4", ConditionRole::sufficient, exact(0.0), "symmetric driver, B = 0"));
    add(make("int1", ConditionRole::sufficient, exact(0.0), "sigma^2 = 0 everywhere"));
    ConditionResult gate = check_necessity_gate(model, config);
    add(gate);
    add(check_ratio(model, RatioMode::u00_sup, config));
    if (!kernel.has_derivative()) {
      add(no_derivative("Cf", ConditionRole::sufficient));
      report.verdict = Verdict::not_semimartingale;
      reason("f is not declared absolutely continuous on [0, inf)");
      return true;
    }
    ConditionResult cf = per_point_sum(
        "Cf", ConditionRole::sufficient, model,
        [&](std::size_t v) {
          const auto* st = model.point(v).levy.as_stable();
          const double a = st->alpha;
          const QuadResult r = fdot_integral(
              kernel, v, [a](double y) { return std::pow(std::abs(y), a); }, {}, config);
          return scaled(r, stable_cf_constant(a, st->c));
        },
        true, "sum of m(v) C(v) integral of |fdot|^alpha(v)");
    const bool ok = cf.finite;
    add(std::move(cf));
    report.verdict = ok ? Verdict::semimartingale : Verdict::not_semimartingale;
    reason(ok ? "integral of |fdot|^alpha is finite" : "integral of |fdot|^alpha is infinite");
    return true;
  }

  bool tempered_rule() {
    if (model.size() != 1) {
      return false;
    }
    const auto& p = model.point(0);
    const auto* ts = p.levy.as_tempered();
    if (ts == nullptr || ts->alpha < 1.0 || p.gaussian_variance != 0.0 || p.drift != 0.0) {
      return false;
    }
    reason("symmetric tempered stable driver with alpha in [1, 2): X is a semimartingale iff "
           "integral of (|fdot|^alpha ^ |fdot|^2) is finite");
    add(make("drift4", ConditionRole::sufficient, exact(0.0), "symmetric driver, B = 0"));
    add(make("int1", ConditionRole::sufficient, exact(0.0), "sigma^2 = 0"));
    add(check_necessity_gate(model, config));
    if (!kernel.has_derivative()) {
      add(no_derivative("Cf", ConditionRole::sufficient));
      report.verdict = Verdict::not_semimartingale;
      reason("f is not declared absolutely continuous on [0, inf)");
      return true;
    }
    const double a = ts->alpha;
    const QuadResult r = fdot_integral(
        kernel, 0,
        [a](double y) {
          const double z = std::abs(y);
          return std::min(std::pow(z, a), z * z);
        },
        {}, config);
    ConditionResult cf = make("Cf", ConditionRole::sufficient, r,
                              "reduced form: integral of (|fdot|^alpha ^ |fdot|^2)");
    cf.per_label.emplace_back(p.label, r.value);
    const bool ok = cf.finite;
    add(std::move(cf));
    report.verdict = ok ? Verdict::semimartingale : Verdict::not_semimartingale;
    reason(ok ? "reduced integral is finite" : "reduced integral is infinite");
    return true;
  }

  void general_path() {
    reason("general sufficiency/necessity theorems");
    const ConditionResult drift = check_drift(model, kernel, config);
    const ConditionResult gate = check_necessity_gate(model, config);
    add(drift);
    add(gate);
    const bool gate_true = gate.status == "true";

    if (!kernel.has_derivative()) {
      add(no_derivative("int1", ConditionRole::sufficient));
      add(no_derivative("Cf", ConditionRole::sufficient));
      add(no_derivative("trunc_case", ConditionRole::necessary));
      if (gate_true) {
        report.verdict = Verdict::not_semimartingale;
        reason("necessity gate holds, so f must be absolutely continuous on [0, inf); "
               "none is declared");
      } else {
        report.verdict = Verdict::inconclusive;
        reason("no derivative declared and the necessity gate does not hold: a discontinuous "
               "f may still give a semimartingale");
      }
      return;
    }

    const ConditionResult int1 = check_int1(model, kernel, config);
    const ConditionResult cf = check_Cf(model, kernel, config);
    add(int1);
    add(cf);
    if (drift.finite && int1.finite && cf.finite) {
      report.verdict = Verdict::semimartingale;
      reason("drift4, int1 and Cf are finite");
      return;
    }
    if (!drift.finite) {
      reason("drift4 is not finite; sufficiency does not apply");
    }
    if (gate.status == "unknown") {
      report.verdict = Verdict::inconclusive;
      reason("necessity gate unknown");
      return;
    }
    if (!gate_true) {
      report.verdict = Verdict::inconclusive;
      reason("sufficient conditions fail and the necessity gate does not hold");
      return;
    }
    const ConditionResult tc = check_trunc_case(model, kernel, config);
    add(tc);
    if (!int1.finite || !tc.finite) {
      report.verdict = Verdict::not_semimartingale;
      reason(!int1.finite ? "int1 is infinite under a true necessity gate"
                          : "trunc_case is infinite under a true necessity gate");
      return;
    }
    const ConditionResult u0 = check_ratio(model, RatioMode::u0_limsup, config);
    const ConditionResult u00 = check_ratio(model, RatioMode::u00_sup, config);
    add(u0);
    add(u00);
    ConditionResult fi = check_fdot_int(model, kernel, config);
    add(fi);
    if ((u0.finite || u00.finite) && !cf.finite) {
      report.verdict = Verdict::not_semimartingale;
      reason(std::string("ratio condition ") + (u00.finite ? "u00" : "u0") +
             " holds, so the necessity theorem is an exact converse and Cf is infinite");
      return;
    }
    report.verdict = Verdict::inconclusive;
    reason("sufficiency fails but no necessity clause is violated");
  }

  void special_clause() {
    ConditionResult c;
    c.id = "special_semimartingale";
    c.role = ConditionRole::info;
    if (report.verdict != Verdict::semimartingale) {
      c.status = "not-applicable";
      c.finite = false;
      c.value = std::numeric_limits<double>::quiet_NaN();
      add(std::move(c));
      return;
    }
    report.special.evaluated = true;
    bool special = true;
    double drift = 0.0;
    for (std::size_t v = 0; v < model.size(); ++v) {
      const auto& p = model.point(v);
      const double f0 = kernel.jump_height(v);
      if (f0 == 0.0) {
        c.per_label.emplace_back(p.label, 0.0);
        continue;
      }
      const QuadResult shift = mean_shift(p.levy, config);
      if (!shift.converged()) {
        special = false;
        c.per_label.emplace_back(p.label, kInf);
        continue;
      }
      const double rate = f0 * (p.drift + shift.value);
      c.per_label.emplace_back(p.label, rate);
      drift += p.weight * rate;
    }
    report.special.special = special;
    report.special.expected_drift = special ? drift : kInf;
    report.special.note = special ? "E|M_t| < inf; E[M_t] = t * expected_drift"
                                  : "integral of |x f(0, v)| over |x| > 1 is infinite for some v";
    c.value = report.special.expected_drift;
    c.finite = special;
    c.status = special ? "true" : "false";
    c.note = report.special.note;
    add(std::move(c));
  }
};

}  // namespace

VerdictReport verdict(const ModelSpec& model, const KernelSpec& kernel,
                      const VerdictOptions& options, const QuadratureConfig& config) {
  kernel.validate_for(model.size());
  Evaluation ev{model, kernel, config, {}};
  if (!kernel.is_simma()) {
    ev.add(check_drift(model, kernel, config));
    ev.report.verdict = Verdict::inconclusive;
    ev.reason("general phi kernel: the moving-average criteria do not apply");
    ev.special_clause();
    return ev.report;
  }
  bool fired = false;
  if (options.closed_form_rules) {
    fired = ev.fractional_rule() || ev.stable_rule() || ev.tempered_rule();
  }
  if (!fired) {
    ev.general_path();
  }
  ev.special_clause();
  return ev.report;
}

}  // namespace idsm
