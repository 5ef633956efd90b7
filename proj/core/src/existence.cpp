#include "idsm/existence.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "idsm/errors.hpp"

namespace idsm {

namespace {

std::vector<double> phi_splits(const KernelSpec& kernel, std::size_t v, double t) {
  std::vector<double> cuts{0.0, t};
  if (kernel.is_simma()) {
    for (double b : kernel.breakpoints(v)) {
      cuts.push_back(t - b);
      cuts.push_back(-b);
    }
  }
  return cuts;
}

QuadResult window_integral(const KernelSpec& kernel, const ModelSpec& model, double t, double lo,
                           double hi, const QuadratureConfig& config,
                           const std::function<double(double, std::size_t)>& h) {
  QuadResult total;
  for (std::size_t v = 0; v < model.size(); ++v) {
    const QuadratureConfig cfg = config.with_splits(phi_splits(kernel, v, t));
    const QuadResult r = integrate([&](double s) { return h(kernel.phi(t, s, v), v); }, lo, hi, cfg);
    total += scaled(r, model.point(v).weight);
  }
  return total;
}

}  // namespace

QuadResult k_window_integral(const KernelSpec& kernel, const ModelSpec& model, double t,
                             double lo, double hi, const QuadratureConfig& config) {
  return window_integral(kernel, model, t, lo, hi, config, [&](double x, std::size_t v) {
    return x == 0.0 ? 0.0 : k_kernel(x, v, model, config).value;
  });
}

ExistenceReport check_existence(const KernelSpec& kernel, const ModelSpec& model, double t,
                                const QuadratureConfig& config) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw ConfigError("check_existence: t must be a finite time >= 0");
  }
  kernel.validate_for(model.size());
  const double inf = std::numeric_limits<double>::infinity();

  ExistenceReport report;
  report.t = t;
  report.b_integral = window_integral(kernel, model, t, -inf, t, config, [&](double x, std::size_t v) {
    if (x == 0.0) {
      return 0.0;
    }
    const QuadResult b = b_kernel(x, v, model, config);
    if (!b.converged()) {
      std::ostringstream msg;
      msg << "B(" << x << ", " << model.point(v).label << ") did not converge";
      throw NumericError(msg.str());
    }
    return std::abs(b.value);
  });
  report.k_integral = k_window_integral(kernel, model, t, -inf, t, config);
  report.exists = report.b_integral.converged() && report.k_integral.converged();

  auto describe = [&](const char* name, const QuadResult& r) {
    if (r.converged()) {
      return;
    }
    std::ostringstream msg;
    msg << name << " integral " << to_string(r.status);
    if (r.diverged()) {
      msg << " (growth exponent " << r.growth_exponent << ")";
    }
    report.notes.push_back(msg.str());
  };
  describe("|B|", report.b_integral);
  describe("K", report.k_integral);
  return report;
}

}  // namespace idsm
