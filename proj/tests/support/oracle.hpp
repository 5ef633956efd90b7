#pragma once

// Double-exponential quadrature used as an independent reference for the
// shell-based integrator in core. Endpoint singularities are fine; interior
// kinks must be passed as split points.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

namespace oracle {

inline constexpr double kStep = 1.0 / 64.0;
inline constexpr double kRange = 5.5;

// tanh-sinh on (a, b); abscissae are formed from the nearer endpoint so a
// singular endpoint is sampled at exact distances.
inline double tanh_sinh(const std::function<double(double)>& f, double a, double b) {
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (double t = -kRange; t <= kRange + 1e-12; t += kStep) {
    const double u = 0.5 * std::numbers::pi * std::sinh(t);
    const double e = std::exp(-2.0 * std::abs(u));
    const double dist = half * 2.0 * e / (1.0 + e);
    if (!(dist > 0.0)) {
      continue;
    }
    const double x = t < 0.0 ? a + dist : b - dist;
    const double ch = std::cosh(u);
    const double w = half * 0.5 * std::numbers::pi * std::cosh(t) / (ch * ch);
    sum += w * f(x);
  }
  return sum * kStep;
}

// exp-sinh on (a, inf).
inline double exp_sinh(const std::function<double(double)>& f, double a) {
  double sum = 0.0;
  for (double t = -kRange; t <= kRange; t += kStep) {
    const double u = 0.5 * std::numbers::pi * std::sinh(t);
    const double dist = std::exp(u);
    if (!(dist > 0.0) || !std::isfinite(dist)) {
      continue;
    }
    const double w = 0.5 * std::numbers::pi * std::cosh(t) * dist;
    sum += w * f(a + dist);
  }
  return sum * kStep;
}

// Integral over (a, b) with b possibly +inf, split at the given interior points.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        std::vector<double> splits = {}) {
  std::vector<double> cuts{a};
  for (double s : splits) {
    if (s > a && s < b) {
      cuts.push_back(s);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += tanh_sinh(f, cuts[i], cuts[i + 1]);
  }
  if (std::isinf(b)) {
    total += exp_sinh(f, cuts.back());
  } else {
    total += tanh_sinh(f, cuts.back(), b);
  }
  return total;
}

// Bisection for the root of a monotone function on [lo, hi].
inline double bisect(const std::function<double(double)>& g, double lo, double hi) {
  const bool rising = g(hi) > g(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((g(mid) > 0.0) == rising) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), std::numeric_limits<double>::min());
}

}  // namespace oracle
