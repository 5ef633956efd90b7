#include "idsm/kernels.hpp"

#include <cmath>
#include <sstream>

#include "idsm/errors.hpp"
#include "idsm/quadrature.hpp"

namespace idsm {

namespace {

double per_point(const std::vector<double>& values, std::size_t v) {
  return values.size() == 1 ? values.front() : values.at(v);
}

}  // namespace

KernelSpec::KernelSpec(KernelFamily family) : family_(std::move(family)) {
  if (const auto* k = std::get_if<FractionalKernel>(&family_)) {
    if (k->gamma.empty()) {
      throw ConfigError("fractional kernel: gamma is required");
    }
    for (double g : k->gamma) {
      if (!(g > 0.0) || !std::isfinite(g)) {
        throw ConfigError("fractional kernel: gamma must be > 0");
      }
      if (g >= 1.0) {
        std::ostringstream msg;
        msg << "fractional kernel: gamma = " << g
            << " >= 1; the process is not well defined for a non-deterministic driver";
        warnings_.push_back(msg.str());
      }
    }
  } else if (const auto* e = std::get_if<ExpMAKernel>(&family_)) {
    if (e->theta.empty()) {
      throw ConfigError("exp_ma kernel: theta is required");
    }
    for (double th : e->theta) {
      if (!(th > 0.0) || !std::isfinite(th)) {
        throw ConfigError("exp_ma kernel: theta must be > 0");
      }
    }
  } else if (const auto* ind = std::get_if<IndicatorKernel>(&family_)) {
    if (!(ind->start >= 0.0 && ind->end > ind->start && std::isfinite(ind->end))) {
      throw ConfigError("indicator kernel: need 0 <= start < end < inf");
    }
  } else if (const auto* s = std::get_if<SimmaKernel>(&family_)) {
    if (!s->f || !s->f0) {
      throw ConfigError("simma kernel: f and f0 must be callable");
    }
  } else if (const auto* p = std::get_if<GeneralPhiKernel>(&family_)) {
    if (!p->phi || !p->diag) {
      throw ConfigError("general phi kernel: phi and diag must be callable");
    }
  }
}

std::string KernelSpec::family_name() const {
  switch (family_.index()) {
    case 0:
      return "fractional";
    case 1:
      return "exp_ma";
    case 2:
      return "indicator";
    case 3:
      return std::get<SimmaKernel>(family_).name;
    default:
      return "general_phi";
  }
}

void KernelSpec::validate_for(std::size_t mixing_points) const {
  auto check = [&](const std::vector<double>& values, const char* what) {
    if (values.size() != 1 && values.size() != mixing_points) {
      std::ostringstream msg;
      msg << "kernel: " << what << " has " << values.size() << " entries but V has "
          << mixing_points << " points";
      throw ConfigError(msg.str());
    }
  };
  if (const auto* k = as_fractional()) {
    check(k->gamma, "gamma");
  } else if (const auto* e = as_exp_ma()) {
    check(e->theta, "theta");
  }
}

double KernelSpec::gamma(std::size_t v) const {
  const auto* k = as_fractional();
  if (k == nullptr) {
    throw UnsupportedError("gamma() on a non-fractional kernel");
  }
  return per_point(k->gamma, v);
}

double KernelSpec::theta(std::size_t v) const {
  const auto* e = as_exp_ma();
  if (e == nullptr) {
    throw UnsupportedError("theta() on a non-exp_ma kernel");
  }
  return per_point(e->theta, v);
}

double KernelSpec::f(double s, std::size_t v) const {
  switch (family_.index()) {
    case 0:
      return s > 0.0 ? std::pow(s, gamma(v)) : 0.0;
    case 1:
      return s >= 0.0 ? std::exp(-theta(v) * s) : 0.0;
    case 2: {
      const auto& k = std::get<IndicatorKernel>(family_);
      return (s >= k.start && s < k.end) ? 1.0 : 0.0;
    }
    case 3:
      return s < 0.0 ? 0.0 : std::get<SimmaKernel>(family_).f(s, v);
    default:
      throw UnsupportedError("general phi kernels have no SIMMA function f");
  }
}

double KernelSpec::f0(double s, std::size_t v) const {
  switch (family_.index()) {
    case 0:
      return f(s, v);
    case 1:
      return 0.0;
    case 2:
      return std::get<IndicatorKernel>(family_).stationary_increments ? f(s, v) : 0.0;
    case 3:
      return s < 0.0 ? 0.0 : std::get<SimmaKernel>(family_).f0(s, v);
    default:
      throw UnsupportedError("general phi kernels have no SIMMA function f0");
  }
}

double KernelSpec::g(double s, std::size_t v) const {
  return s >= 0.0 ? f(s, v) - f(0.0, v) : 0.0;
}

double KernelSpec::phi(double t, double s, std::size_t v) const {
  if (const auto* p = std::get_if<GeneralPhiKernel>(&family_)) {
    return s > t ? 0.0 : p->phi(t, s, v);
  }
  return f(t - s, v) - f0(-s, v);
}

double KernelSpec::diag(double s, std::size_t v) const {
  if (const auto* p = std::get_if<GeneralPhiKernel>(&family_)) {
    return p->diag(s, v);
  }
  return f(0.0, v);
}

bool KernelSpec::has_derivative() const {
  switch (family_.index()) {
    case 0:
    case 1:
      return true;
    case 3:
      return static_cast<bool>(std::get<SimmaKernel>(family_).fdot);
    default:
      return false;
  }
}

std::optional<double> KernelSpec::fdot(double t, std::size_t v) const {
  if (!(t > 0.0)) {
    throw ConfigError("fdot requires t > 0");
  }
  switch (family_.index()) {
    case 0: {
      const double gm = gamma(v);
      return gm * std::pow(t, gm - 1.0);
    }
    case 1: {
      const double th = theta(v);
      return -th * std::exp(-th * t);
    }
    case 3: {
      const auto& k = std::get<SimmaKernel>(family_);
      if (!k.fdot) {
        return std::nullopt;
      }
      return k.fdot(t, v);
    }
    default:
      return std::nullopt;
  }
}

std::vector<double> KernelSpec::fdot_level_crossings(double level, std::size_t v) const {
  if (!(level > 0.0) || !std::isfinite(level)) {
    return {};
  }
  if (as_fractional() != nullptr) {
    // gamma t^(gamma - 1) = level
    const double gm = gamma(v);
    if (gm == 1.0) {
      return {};
    }
    const double t = std::pow(level / gm, 1.0 / (gm - 1.0));
    if (t > 0.0 && std::isfinite(t)) {
      return {t};
    }
    return {};
  }
  if (as_exp_ma() != nullptr) {
    // theta exp(-theta t) = level
    const double th = theta(v);
    if (th > level) {
      return {std::log(th / level) / th};
    }
  }
  return {};
}

std::vector<double> KernelSpec::breakpoints(std::size_t v) const {
  switch (family_.index()) {
    case 2: {
      const auto& k = std::get<IndicatorKernel>(family_);
      return {k.start, k.end};
    }
    case 3: {
      auto pts = std::get<SimmaKernel>(family_).breakpoints;
      pts.push_back(0.0);
      return pts;
    }
    default:
      (void)v;
      return {0.0};
  }
}

GSplit g_split(const KernelSpec& kernel, std::size_t mixing_points) {
  if (!kernel.is_simma()) {
    throw UnsupportedError("g_split: a general phi kernel has no canonical g-split");
  }
  GSplit split;
  split.g = [kernel](double s, std::size_t v) { return kernel.g(s, v); };
  for (std::size_t v = 0; v < mixing_points; ++v) {
    split.jump_height.push_back(kernel.jump_height(v));
  }
  return split;
}

double derivative_mismatch(const KernelSpec& kernel, std::size_t v, double a, double b) {
  if (!kernel.has_derivative()) {
    throw UnsupportedError("derivative_mismatch: kernel declares no derivative");
  }
  QuadratureConfig cfg;
  for (double p : kernel.breakpoints(v)) {
    cfg.split_points.push_back(p);
  }
  const QuadResult r = integrate([&](double t) { return *kernel.fdot(t, v); }, a, b, cfg);
  return std::abs(kernel.f(b, v) - kernel.f(a, v) - r.value);
}

}  // namespace idsm
