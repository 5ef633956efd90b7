#include "idsm/levy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>

#include "idsm/errors.hpp"

namespace idsm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

QuadResult exact(double value) {
  QuadResult r;
  r.value = value;
  return r;
}

QuadResult divergent(double growth_exponent = 0.0) {
  QuadResult r;
  r.value = kInf;
  r.status = QuadStatus::diverged;
  r.growth_exponent = growth_exponent;
  return r;
}

// Atoms of a point-mass measure as (position, mass) pairs.
std::vector<std::pair<double, double>> atoms_of(const PointMassParams& p, bool symmetric) {
  std::vector<std::pair<double, double>> atoms{{p.position, p.mass}};
  if (symmetric) {
    atoms.emplace_back(-p.position, p.mass);
  }
  return atoms;
}

// inf{x > 0 : tail(x) <= s} for a continuous, strictly decreasing tail.
double invert_continuous_tail(const std::function<double(double)>& tail, double s, double guess) {
  if (tail(std::numeric_limits<double>::min()) <= s) {
    return 0.0;
  }
  double hi = std::max(guess, std::numeric_limits<double>::min());
  double lo = hi;
  int steps = 0;
  while (tail(hi) > s) {
    hi *= 2.0;
    if (!std::isfinite(hi) || ++steps > 2100) {
      throw NumericError("tail_quantile: failed to bracket the upper end");
    }
  }
  lo = hi;
  steps = 0;
  while (tail(lo) <= s) {
    lo *= 0.5;
    if (lo == 0.0 || ++steps > 2100) {
      return 0.0;
    }
  }
  auto f = [&](double x) { return tail(x) - s; };
  boost::uintmax_t max_iter = 300;
  const auto bracket = boost::math::tools::toms748_solve(
      f, lo, hi, boost::math::tools::eps_tolerance<double>(52), max_iter);
  return 0.5 * (bracket.first + bracket.second);
}

// inf{x > 0 : sum of masses at positions > x is <= s} for positive positions.
double invert_atomic_tail(std::vector<std::pair<double, double>> positive_atoms, double s) {
  std::sort(positive_atoms.begin(), positive_atoms.end());
  double remaining = 0.0;
  for (const auto& a : positive_atoms) {
    remaining += a.second;
  }
  if (remaining <= s) {
    return 0.0;
  }
  for (const auto& a : positive_atoms) {
    remaining -= a.second;
    if (remaining <= s) {
      return a.first;
    }
  }
  return positive_atoms.back().first;
}

double custom_side_integral(const CustomParams& p, double x, int side) {
  QuadratureConfig cfg;
  cfg.split_points = {1.0};
  const auto r = integrate([&](double y) { return p.density(side * y); }, x, kInf, cfg);
  if (r.diverged()) {
    return kInf;
  }
  return r.value;
}

double tail_side(const LevyMeasure1D& rho, double x, int side) {
  return std::visit(
      Overloaded{
          [&](const StableParams& p) { return p.c / p.alpha * std::pow(x, -p.alpha); },
          [&](const TemperedStableParams& p) {
            return p.c * std::pow(p.lambda, p.alpha) *
                   upper_incomplete_gamma(-p.alpha, p.lambda * x);
          },
          [&](const PointMassParams& p) {
            double mass = 0.0;
            for (const auto& [pos, w] : atoms_of(p, rho.symmetric())) {
              if (side * pos > x) {
                mass += w;
              }
            }
            return mass;
          },
          [&](const CustomParams& p) { return custom_side_integral(p, x, side); },
      },
      rho.family());
}

double quantile_side(const LevyMeasure1D& rho, double s, int side) {
  if (const auto* st = rho.as_stable()) {
    return std::pow(st->c / (st->alpha * s), 1.0 / st->alpha);
  }
  if (const auto* pm = rho.as_point_mass()) {
    std::vector<std::pair<double, double>> positive;
    for (const auto& [pos, w] : atoms_of(*pm, rho.symmetric())) {
      if (side * pos > 0.0) {
        positive.emplace_back(side * pos, w);
      }
    }
    return invert_atomic_tail(std::move(positive), s);
  }
  double guess = 1.0;
  if (const auto* ts = rho.as_tempered()) {
    // The tempered tail is dominated by the stable one with the same (alpha, c).
    guess = std::pow(ts->c / (ts->alpha * s), 1.0 / ts->alpha);
  }
  return invert_continuous_tail([&](double x) { return tail_side(rho, x, side); }, s, guess);
}

void require(bool condition, const std::string& message) {
  if (!condition) {
    throw ConfigError(message);
  }
}

}  // namespace

double truncate(double x) { return x / std::max(std::abs(x), 1.0); }

double upper_incomplete_gamma(double s, double z) {
  if (!(z > 0.0)) {
    throw ConfigError("upper_incomplete_gamma requires z > 0");
  }
  if (s > 0.0) {
    return boost::math::tgamma(s, z);
  }
  if (s == 0.0) {
    return boost::math::expint(1, z);
  }
  // Gamma(s, z) = (Gamma(s + 1, z) - z^s e^-z) / s
  return (upper_incomplete_gamma(s + 1.0, z) - std::pow(z, s) * std::exp(-z)) / s;
}

LevyMeasure1D LevyMeasure1D::stable(double alpha, double c) {
  require(alpha > 0.0 && alpha < 2.0, "stable: alpha must lie in (0, 2)");
  require(c > 0.0 && std::isfinite(c), "stable: c must be positive");
  return LevyMeasure1D(StableParams{alpha, c}, true);
}

LevyMeasure1D LevyMeasure1D::tempered_stable(double alpha, double c, double lambda) {
  require(alpha > 0.0 && alpha < 2.0, "tempered_stable: alpha must lie in (0, 2)");
  require(c > 0.0 && std::isfinite(c), "tempered_stable: c must be positive");
  require(lambda > 0.0 && std::isfinite(lambda), "tempered_stable: lambda must be positive");
  return LevyMeasure1D(TemperedStableParams{alpha, c, lambda}, true);
}

LevyMeasure1D LevyMeasure1D::point_mass(double position, double mass, bool symmetric) {
  require(position != 0.0 && std::isfinite(position), "point_mass: position must be nonzero");
  require(mass > 0.0 && std::isfinite(mass), "point_mass: mass must be positive");
  return LevyMeasure1D(PointMassParams{position, mass}, symmetric);
}

LevyMeasure1D LevyMeasure1D::custom(std::function<double(double)> density, bool symmetric,
                                    std::optional<double> small_jump_index,
                                    std::optional<double> large_jump_index) {
  require(static_cast<bool>(density), "custom: density must be callable");
  LevyMeasure1D rho(CustomParams{std::move(density), small_jump_index, large_jump_index},
                    symmetric);
  const QuadResult check = levy_integrability(rho);
  require(check.converged(), "custom: integral of (1 ^ x^2) rho(dx) is not finite");
  return rho;
}

std::string LevyMeasure1D::family_name() const {
  return std::visit(Overloaded{
                        [](const StableParams&) { return std::string("stable"); },
                        [](const TemperedStableParams&) { return std::string("tempered_stable"); },
                        [](const PointMassParams&) { return std::string("point_mass"); },
                        [](const CustomParams&) { return std::string("custom"); },
                    },
                    family_);
}

std::optional<double> LevyMeasure1D::density(double x) const {
  const double ax = std::abs(x);
  return std::visit(
      Overloaded{
          [&](const StableParams& p) -> std::optional<double> {
            return p.c * std::pow(ax, -p.alpha - 1.0);
          },
          [&](const TemperedStableParams& p) -> std::optional<double> {
            return p.c * std::pow(ax, -p.alpha - 1.0) * std::exp(-p.lambda * ax);
          },
          [](const PointMassParams&) -> std::optional<double> { return std::nullopt; },
          [&](const CustomParams& p) -> std::optional<double> { return p.density(x); },
      },
      family_);
}

double LevyMeasure1D::tail_plus(double x) const {
  require(x > 0.0, "tail_plus requires x > 0");
  return tail_side(*this, x, +1);
}

double LevyMeasure1D::tail_minus(double x) const {
  require(x > 0.0, "tail_minus requires x > 0");
  return tail_side(*this, x, -1);
}

std::optional<double> LevyMeasure1D::small_jump_index() const {
  return std::visit(Overloaded{
                        [](const StableParams& p) -> std::optional<double> { return p.alpha; },
                        [](const TemperedStableParams& p) -> std::optional<double> { return p.alpha; },
                        [](const PointMassParams&) -> std::optional<double> { return 0.0; },
                        [](const CustomParams& p) { return p.small_jump_index; },
                    },
                    family_);
}

std::optional<double> LevyMeasure1D::large_jump_index() const {
  return std::visit(Overloaded{
                        [](const StableParams& p) -> std::optional<double> { return p.alpha; },
                        [](const TemperedStableParams&) -> std::optional<double> { return kInf; },
                        [](const PointMassParams&) -> std::optional<double> { return kInf; },
                        [](const CustomParams& p) { return p.large_jump_index; },
                    },
                    family_);
}

ModelSpec::ModelSpec(std::vector<MixingPoint> points) : points_(std::move(points)) {
  require(!points_.empty(), "model: the mixing space V must be nonempty");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    auto& p = points_[i];
    if (p.label.empty()) {
      p.label = "v" + std::to_string(i);
    }
    require(p.weight > 0.0 && std::isfinite(p.weight),
            "model: weight m(" + p.label + ") must be strictly positive");
    require(p.gaussian_variance >= 0.0 && std::isfinite(p.gaussian_variance),
            "model: gaussian_variance(" + p.label + ") must be nonnegative");
    require(std::isfinite(p.drift), "model: drift(" + p.label + ") must be finite");
  }
}

double ModelSpec::total_weight() const {
  double total = 0.0;
  for (const auto& p : points_) {
    total += p.weight;
  }
  return total;
}

bool ModelSpec::all_symmetric() const {
  return std::all_of(points_.begin(), points_.end(),
                     [](const MixingPoint& p) { return p.levy.symmetric(); });
}

ModelSpec single_point_model(LevyMeasure1D levy, double drift, double gaussian_variance) {
  MixingPoint p;
  p.label = "v0";
  p.drift = drift;
  p.gaussian_variance = gaussian_variance;
  p.levy = std::move(levy);
  return ModelSpec({std::move(p)});
}

double tail_quantile(const LevyMeasure1D& rho, double s) {
  if (s == 0.0 || std::isnan(s)) {
    throw ConfigError("tail_quantile: s must be a nonzero real");
  }
  if (s > 0.0) {
    return quantile_side(rho, s, +1);
  }
  return -quantile_side(rho, -s, -1);
}

QuadResult integrate_levy_band(const LevyMeasure1D& rho, const std::function<double(double)>& g,
                               double lo, double hi, const std::vector<double>& splits,
                               const QuadratureConfig& config) {
  if (const auto* pm = rho.as_point_mass()) {
    double total = 0.0;
    for (const auto& [pos, w] : atoms_of(*pm, rho.symmetric())) {
      const double a = std::abs(pos);
      if (a > lo && a <= hi) {
        total += w * g(pos);
      }
    }
    return exact(total);
  }
  std::vector<double> cuts = splits;
  cuts.push_back(1.0);
  const QuadratureConfig cfg = config.with_splits(cuts);
  auto side = [&](int sign) {
    return integrate(
        [&](double y) {
          const double d = *rho.density(sign * y);
          return d == 0.0 ? 0.0 : g(sign * y) * d;
        },
        lo, hi, cfg);
  };
  QuadResult total = side(+1);
  total += side(-1);
  return total;
}

QuadResult integrate_levy(const LevyMeasure1D& rho, const std::function<double(double)>& g,
                          const std::vector<double>& splits, const QuadratureConfig& config) {
  return integrate_levy_band(rho, g, 0.0, kInf, splits, config);
}

QuadResult b_kernel(double x, std::size_t v, const ModelSpec& model,
                    const QuadratureConfig& config) {
  if (x == 0.0) {
    return exact(0.0);
  }
  const MixingPoint& p = model.point(v);
  const double linear = x * p.drift;
  if (p.levy.symmetric()) {
    // [[x y]] - x [[y]] is odd in y.
    return exact(linear);
  }
  // The integrand vanishes for |y| < min(1, 1/|x|).
  const double start = std::min(1.0, 1.0 / std::abs(x));
  QuadResult r = integrate_levy_band(
      p.levy, [x](double y) { return truncate(x * y) - x * truncate(y); }, start, kInf,
      {1.0 / std::abs(x)}, config);
  if (!r.diverged()) {
    r.value += linear;
  }
  return r;
}

QuadResult k_kernel(double x, std::size_t v, const ModelSpec& model,
                    const QuadratureConfig& config) {
  if (x == 0.0) {
    return exact(0.0);
  }
  const MixingPoint& p = model.point(v);
  const double gaussian = x * x * p.gaussian_variance;
  const double ax = std::abs(x);
  if (const auto* st = p.levy.as_stable()) {
    const double a = st->alpha;
    return exact(gaussian + 2.0 * st->c * std::pow(ax, a) * (1.0 / (2.0 - a) + 1.0 / a));
  }
  if (const auto* ts = p.levy.as_tempered()) {
    const double a = ts->alpha;
    const double l = ts->lambda;
    const double z = l / ax;
    const double inner = x * x * std::pow(l, a - 2.0) * boost::math::tgamma_lower(2.0 - a, z);
    const double outer = std::pow(l, a) * upper_incomplete_gamma(-a, z);
    return exact(gaussian + 2.0 * ts->c * (inner + outer));
  }
  const double x2 = x * x;
  QuadResult r = integrate_levy(
      p.levy, [x2](double y) { return std::min(x2 * y * y, 1.0); }, {1.0 / std::abs(x)}, config);
  if (!r.diverged()) {
    r.value += gaussian;
  }
  return r;
}

QuadResult levy_integrability(const LevyMeasure1D& rho, const QuadratureConfig& config) {
  if (const auto* st = rho.as_stable()) {
    return exact(2.0 * st->c * (1.0 / (2.0 - st->alpha) + 1.0 / st->alpha));
  }
  if (const auto* ts = rho.as_tempered()) {
    const double a = ts->alpha;
    const double l = ts->lambda;
    const double inner = std::pow(l, a - 2.0) * boost::math::tgamma_lower(2.0 - a, l);
    const double outer = std::pow(l, a) * upper_incomplete_gamma(-a, l);
    return exact(2.0 * ts->c * (inner + outer));
  }
  return integrate_levy(rho, [](double y) { return std::min(y * y, 1.0); }, {}, config);
}

QuadResult power_moment(const LevyMeasure1D& rho, double p, const QuadratureConfig& config) {
  if (const auto* st = rho.as_stable()) {
    // Converges at 0 only for p > alpha and at infinity only for p < alpha.
    return divergent(std::abs(p - st->alpha));
  }
  if (const auto* ts = rho.as_tempered()) {
    if (p <= ts->alpha) {
      return divergent(ts->alpha - p);
    }
    return exact(2.0 * ts->c * std::tgamma(p - ts->alpha) * std::pow(ts->lambda, ts->alpha - p));
  }
  return integrate_levy(rho, [p](double y) { return std::pow(std::abs(y), p); }, {}, config);
}

QuadResult truncated_second_moment(const LevyMeasure1D& rho, double r,
                                   const QuadratureConfig& config) {
  if (!(r > 0.0)) {
    return exact(0.0);
  }
  if (const auto* st = rho.as_stable()) {
    return exact(2.0 * st->c * std::pow(r, 2.0 - st->alpha) / (2.0 - st->alpha));
  }
  if (const auto* ts = rho.as_tempered()) {
    const double a = ts->alpha;
    return exact(2.0 * ts->c * std::pow(ts->lambda, a - 2.0) *
                 boost::math::tgamma_lower(2.0 - a, ts->lambda * r));
  }
  if (const auto* pm = rho.as_point_mass()) {
    double total = 0.0;
    for (const auto& [pos, w] : atoms_of(*pm, rho.symmetric())) {
      if (std::abs(pos) < r) {
        total += w * pos * pos;
      }
    }
    return exact(total);
  }
  return integrate_levy_band(rho, [](double y) { return y * y; }, 0.0, r, {}, config);
}

QuadResult mean_shift(const LevyMeasure1D& rho, const QuadratureConfig& config) {
  const auto eta = rho.large_jump_index();
  if (eta && *eta <= 1.0) {
    return divergent(1.0 - *eta);
  }
  if (rho.symmetric() && eta) {
    return exact(0.0);
  }
  QuadResult first = integrate_levy_band(
      rho, [](double y) { return std::abs(y); }, 1.0, kInf, {}, config);
  if (!first.converged()) {
    return first;
  }
  return integrate_levy_band(
      rho, [](double y) { return y - truncate(y); }, 1.0, kInf, {}, config);
}

}  // namespace idsm
