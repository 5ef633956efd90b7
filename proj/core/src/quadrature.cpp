#include "idsm/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "idsm/errors.hpp"

namespace idsm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208620391080, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

// Number of shells before any convergence or divergence decision is taken.
constexpr int kMinShells = 4;
constexpr int kMinShellsForDivergence = 8;
// Slopes of consecutive shells must agree to this much before they are trusted.
constexpr double kSlopeStability = 1e-2;
constexpr double kSlopeTrend = 1e-9;
// Panel budget for the cheap first attempt on a finite piece.
constexpr int kFirstAttemptPanels = 32;

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  double abs_value = 0.0;
  bool operator<(const Panel& other) const { return error < other.error; }
};

class Sampler {
 public:
  Sampler(const Integrand& f, long& evaluations) : f_(f), evaluations_(evaluations) {}

  double operator()(double x) const {
    ++evaluations_;
    const double y = f_(x);
    if (!std::isfinite(y)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "integrand returned " << y << " at x = " << x;
      throw NumericError(msg.str());
    }
    return y;
  }

 private:
  const Integrand& f_;
  long& evaluations_;
};

Panel gauss_kronrod21(const Sampler& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double abs_half = std::abs(half);

  std::array<double, 10> f1{};
  std::array<double, 10> f2{};
  const double fc = f(center);
  double res_g = 0.0;
  double res_k = kWgk[10] * fc;
  double res_abs = std::abs(res_k);
  for (int j = 0; j < 5; ++j) {
    const int jtw = 2 * j + 1;
    const double dx = half * kXgk[jtw];
    f1[jtw] = f(center - dx);
    f2[jtw] = f(center + dx);
    res_g += kWg[j] * (f1[jtw] + f2[jtw]);
    res_k += kWgk[jtw] * (f1[jtw] + f2[jtw]);
    res_abs += kWgk[jtw] * (std::abs(f1[jtw]) + std::abs(f2[jtw]));
  }
  for (int j = 0; j < 5; ++j) {
    const int jtwm1 = 2 * j;
    const double dx = half * kXgk[jtwm1];
    f1[jtwm1] = f(center - dx);
    f2[jtwm1] = f(center + dx);
    res_k += kWgk[jtwm1] * (f1[jtwm1] + f2[jtwm1]);
    res_abs += kWgk[jtwm1] * (std::abs(f1[jtwm1]) + std::abs(f2[jtwm1]));
  }
  const double mean = 0.5 * res_k;
  double res_asc = kWgk[10] * std::abs(fc - mean);
  for (int j = 0; j < 10; ++j) {
    res_asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }

  Panel p;
  p.a = a;
  p.b = b;
  p.value = res_k * half;
  p.abs_value = res_abs * abs_half;
  res_asc *= abs_half;
  double err = std::abs((res_k - res_g) * half);
  if (res_asc != 0.0 && err != 0.0) {
    err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  }
  if (p.abs_value > std::numeric_limits<double>::min() / (50.0 * kEps)) {
    err = std::max(50.0 * kEps * p.abs_value, err);
  }
  p.error = err;
  return p;
}

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;
  double abs_value = 0.0;
  bool converged = false;
};

// Globally adaptive bisection on [a, b], worst panel first.
AdaptiveResult adaptive(const Sampler& f, double a, double b, double rel_tol, double abs_floor,
                        int max_panels) {
  std::priority_queue<Panel> heap;
  Panel first = gauss_kronrod21(f, a, b);
  double value = first.value;
  double error = first.error;
  double abs_value = first.abs_value;
  heap.push(first);
  int panels = 1;
  auto target = [&] {
    return std::max({rel_tol * std::abs(value), abs_floor, 50.0 * kEps * abs_value});
  };
  while (error > target() && panels < max_panels) {
    const Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {
      break;  // panel no longer divisible in floating point
    }
    heap.pop();
    const Panel left = gauss_kronrod21(f, worst.a, mid);
    const Panel right = gauss_kronrod21(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    abs_value += left.abs_value + right.abs_value - worst.abs_value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++panels;
  }
  // Re-sum from the panels to shed accumulated cancellation in the running totals.
  AdaptiveResult out;
  while (!heap.empty()) {
    out.value += heap.top().value;
    out.error += heap.top().error;
    out.abs_value += heap.top().abs_value;
    heap.pop();
  }
  out.converged = out.error <= std::max({rel_tol * std::abs(out.value), abs_floor,
                                         50.0 * kEps * out.abs_value});
  return out;
}

// Produces the k-th shell [x0, x1]; returns false once the shell can no longer
// be represented (overflow towards infinity, resolution limit at an endpoint).
using ShellBounds = std::function<bool(int, double&, double&)>;

QuadResult shell_sum(const Sampler& f, const ShellBounds& shell, const QuadratureConfig& cfg,
                     long& evaluations) {
  QuadResult out;
  const double log_growth = std::log(cfg.window_growth_factor);
  std::vector<double> values;
  std::vector<double> abs_values;
  double total = 0.0;
  double error = 0.0;

  auto slope = [&](std::size_t i) {  // slope between shells i-1 and i
    return std::log(abs_values[i] / abs_values[i - 1]) / log_growth;
  };
  auto finish_with_tail = [&](double ratio, double tail_error) {
    const double factor = ratio / (1.0 - ratio);
    total += values.back() * factor;
    error += tail_error;
    out.status = QuadStatus::converged;
  };

  for (int k = 0;; ++k) {
    double x0 = 0.0;
    double x1 = 0.0;
    if (!shell(k, x0, x1)) {
      // Out of representable shells: accept only if the sequence is contracting.
      const std::size_t n = abs_values.size();
      out.status = QuadStatus::max_refinement;
      if (n >= 2 && abs_values[n - 1] == 0.0) {
        out.status = QuadStatus::converged;
      } else if (n >= 2 && abs_values[n - 2] > 0.0) {
        const double q = abs_values[n - 1] / abs_values[n - 2];
        if (q < 1.0) {
          const double tail = abs_values[n - 1] * q / (1.0 - q);
          const double target = std::max(cfg.rel_tol * std::abs(total), cfg.abs_tol);
          finish_with_tail(q, tail);
          if (tail > target) {
            out.status = QuadStatus::max_refinement;
          }
        }
      }
      break;
    }
    const double abs_floor = 1e-3 * cfg.abs_tol;
    const AdaptiveResult piece = adaptive(f, x0, x1, cfg.rel_tol, abs_floor, cfg.max_panels);
    total += piece.value;
    error += piece.error;
    values.push_back(piece.value);
    abs_values.push_back(piece.abs_value);

    if (!std::isfinite(total)) {
      out.status = QuadStatus::diverged;
      out.growth_exponent = abs_values.size() >= 2 && abs_values[abs_values.size() - 2] > 0.0
                                ? slope(abs_values.size() - 1)
                                : kInf;
      break;
    }
    const std::size_t n = abs_values.size();
    if (n < static_cast<std::size_t>(kMinShells)) {
      continue;
    }
    const double target = std::max(cfg.rel_tol * std::abs(total), cfg.abs_tol);
    const double a3 = abs_values[n - 1];
    const double a2 = abs_values[n - 2];
    const double a1 = abs_values[n - 3];
    const double a0 = abs_values[n - 4];
    if (a3 == 0.0 && a2 == 0.0) {
      out.status = QuadStatus::converged;
      break;
    }
    if (a3 == 0.0 || a2 == 0.0 || a1 == 0.0 || a0 == 0.0) {
      continue;
    }
    const double s3 = slope(n - 1);
    const double s2 = slope(n - 2);
    const double s1 = slope(n - 3);
    const bool stable =
        std::abs(s3 - s2) <= kSlopeStability && std::abs(s2 - s1) <= kSlopeStability;
    const double threshold = cfg.divergence_slope_threshold;
    // Slopes still drifting downward may settle below zero (sub-leading
    // power corrections), so only a flat or rising slope sequence counts.
    const bool settling = s3 < s1 - kSlopeTrend;
    if (n >= static_cast<std::size_t>(kMinShellsForDivergence) && stable && !settling &&
        s3 >= -threshold && s2 >= -threshold && s1 >= -threshold) {
      out.status = QuadStatus::diverged;
      out.growth_exponent = s3;
      break;
    }
    const double q3 = a3 / a2;
    if (q3 >= 1.0) {
      continue;
    }
    const double tail = a3 * q3 / (1.0 - q3);
    if (tail <= 0.01 * target) {
      finish_with_tail(q3, tail);
      break;
    }
    const double q1 = a1 / a0;
    if (stable && q1 < 1.0) {
      // Geometric extrapolation; the spread between the tails predicted by
      // the latest and an older ratio serves as its error estimate.
      const double tail_old = a3 * q1 / (1.0 - q1);
      const double spread = std::abs(tail - tail_old);
      if (spread <= 0.1 * target) {
        finish_with_tail(q3, spread);
        break;
      }
    }
  }
  out.value = total;
  out.error_estimate = error;
  out.evaluations = evaluations;
  return out;
}

QuadResult finite_piece(const Sampler& f, double a, double b, const QuadratureConfig& cfg,
                        long& evaluations) {
  QuadResult out;
  const AdaptiveResult quick = adaptive(f, a, b, cfg.rel_tol, 1e-3 * cfg.abs_tol,
                                        std::min(kFirstAttemptPanels, cfg.max_panels));
  if (quick.converged) {
    out.value = quick.value;
    out.error_estimate = quick.error;
    return out;
  }
  // Possible endpoint singularities: shells from the midpoint towards each end.
  const double mid = 0.5 * (a + b);
  const double g = cfg.window_growth_factor;
  auto toward = [g](double end, double start) -> ShellBounds {
    const double d = start - end;
    return [=](int k, double& x0, double& x1) {
      const double outer = d * std::pow(g, -k);
      const double inner = d * std::pow(g, -(k + 1));
      const double resolution = 8.0 * kEps * std::max(std::abs(end), 1e-300);
      if (std::abs(inner) < resolution || std::abs(inner) < 1e-300) {
        return false;
      }
      x0 = end + std::min(inner, outer);
      x1 = end + std::max(inner, outer);
      return x0 < x1;
    };
  };
  out += shell_sum(f, toward(a, mid), cfg, evaluations);
  out += shell_sum(f, toward(b, mid), cfg, evaluations);
  return out;
}

QuadResult infinite_piece(const Sampler& f, double anchor, int direction,
                          const QuadratureConfig& cfg, long& evaluations) {
  // [anchor, anchor + w] (or its mirror) followed by shells growing outward.
  const double w = std::max(1.0, std::abs(anchor));
  QuadResult out = direction > 0 ? finite_piece(f, anchor, anchor + w, cfg, evaluations)
                                 : finite_piece(f, anchor - w, anchor, cfg, evaluations);
  const double g = cfg.window_growth_factor;
  ShellBounds shells = [=](int k, double& x0, double& x1) {
    const double near = w * std::pow(g, k);
    const double far = w * std::pow(g, k + 1);
    if (!std::isfinite(far) || !std::isfinite(anchor + direction * far)) {
      return false;
    }
    x0 = direction > 0 ? anchor + near : anchor - far;
    x1 = direction > 0 ? anchor + far : anchor - near;
    return x0 < x1;
  };
  out += shell_sum(f, shells, cfg, evaluations);
  return out;
}

}  // namespace

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw ConfigError("quadrature tolerances must be positive");
  }
  if (max_panels < 64) {
    throw ConfigError("quadrature max_panels must be at least 64");
  }
  if (!(window_growth_factor > 1.0)) {
    throw ConfigError("quadrature window_growth_factor must exceed 1");
  }
  if (!(divergence_slope_threshold >= 0.0)) {
    throw ConfigError("quadrature divergence_slope_threshold must be nonnegative");
  }
}

QuadratureConfig QuadratureConfig::with_splits(const std::vector<double>& extra) const {
  QuadratureConfig copy = *this;
  copy.split_points.insert(copy.split_points.end(), extra.begin(), extra.end());
  return copy;
}

std::string_view to_string(QuadStatus status) {
  switch (status) {
    case QuadStatus::converged:
      return "converged";
    case QuadStatus::diverged:
      return "diverged";
    case QuadStatus::max_refinement:
      return "max_refinement";
  }
  return "unknown";
}

QuadResult& QuadResult::operator+=(const QuadResult& other) {
  value += other.value;
  error_estimate += other.error_estimate;
  evaluations += other.evaluations;
  if (other.status == QuadStatus::diverged) {
    if (status != QuadStatus::diverged) {
      growth_exponent = other.growth_exponent;
    }
    status = QuadStatus::diverged;
  } else if (other.status == QuadStatus::max_refinement && status == QuadStatus::converged) {
    status = QuadStatus::max_refinement;
  }
  if (status == QuadStatus::diverged) {
    value = kInf;
  }
  return *this;
}

QuadResult scaled(const QuadResult& result, double weight) {
  QuadResult out = result;
  if (weight == 0.0) {
    out.value = 0.0;
    out.error_estimate = 0.0;
    out.status = QuadStatus::converged;
    return out;
  }
  out.value = result.diverged() ? kInf : weight * result.value;
  out.error_estimate = std::abs(weight) * result.error_estimate;
  return out;
}

QuadResult integrate(const Integrand& f, double lo, double hi, const QuadratureConfig& config) {
  config.validate();
  if (std::isnan(lo) || std::isnan(hi)) {
    throw ConfigError("integration bounds must not be NaN");
  }
  if (lo == hi) {
    return {};
  }
  if (lo > hi) {
    QuadResult r = integrate(f, hi, lo, config);
    r.value = -r.value;
    return r;
  }

  std::vector<double> cuts;
  for (double p : config.split_points) {
    if (std::isfinite(p) && p > lo && p < hi) {
      cuts.push_back(p);
    }
  }
  if (std::isinf(lo) && std::isinf(hi) && cuts.empty()) {
    cuts.push_back(0.0);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<double> nodes;
  nodes.push_back(lo);
  nodes.insert(nodes.end(), cuts.begin(), cuts.end());
  nodes.push_back(hi);

  long evaluations = 0;
  const Sampler sampler(f, evaluations);
  QuadResult total;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double a = nodes[i];
    const double b = nodes[i + 1];
    QuadResult piece;
    if (std::isinf(a)) {
      piece = infinite_piece(sampler, b, -1, config, evaluations);
    } else if (std::isinf(b)) {
      piece = infinite_piece(sampler, a, +1, config, evaluations);
    } else {
      piece = finite_piece(sampler, a, b, config, evaluations);
    }
    piece.evaluations = 0;
    total += piece;
  }
  total.evaluations = evaluations;
  return total;
}

}  // namespace idsm
