#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace idsm {

/// f(t, v) = t_+^gamma(v), f0 = f. One gamma per mixing point, or a single
/// value shared by all of them.
struct FractionalKernel {
  std::vector<double> gamma;
};

/// f(t, v) = exp(-theta(v) t) for t >= 0, f0 = 0.
struct ExpMAKernel {
  std::vector<double> theta;
};

/// f = 1_[start, end); f0 = f when `stationary_increments`, else f0 = 0.
/// No derivative is declared.
struct IndicatorKernel {
  double start = 0.0;
  double end = 1.0;
  bool stationary_increments = false;
};

/// User supplied f and f0 (both must vanish on s < 0). `fdot` is the declared
/// derivative of f on (0, inf); leave it empty when f is not absolutely
/// continuous. `breakpoints` lists s >= 0 where f or fdot is not smooth.
struct SimmaKernel {
  std::string name = "simma";
  std::function<double(double, std::size_t)> f;
  std::function<double(double, std::size_t)> f0;
  std::function<double(double, std::size_t)> fdot;
  std::vector<double> breakpoints;
};

/// Arbitrary causal phi(t, s, v) with its diagonal phi(s, s, v).
struct GeneralPhiKernel {
  std::function<double(double, double, std::size_t)> phi;
  std::function<double(double, std::size_t)> diag;
};

using KernelFamily =
    std::variant<FractionalKernel, ExpMAKernel, IndicatorKernel, SimmaKernel, GeneralPhiKernel>;

/// Deterministic kernel phi(t, s, v) = f(t - s, v) - f0(-s, v), or a general phi.
class KernelSpec {
 public:
  explicit KernelSpec(KernelFamily family);

  static KernelSpec fractional(double gamma) { return KernelSpec(FractionalKernel{{gamma}}); }
  static KernelSpec exp_ma(double theta) { return KernelSpec(ExpMAKernel{{theta}}); }
  static KernelSpec indicator(double start = 0.0, double end = 1.0) {
    return KernelSpec(IndicatorKernel{start, end, false});
  }

  [[nodiscard]] const KernelFamily& family() const { return family_; }
  [[nodiscard]] std::string family_name() const;
  [[nodiscard]] bool is_simma() const { return !std::holds_alternative<GeneralPhiKernel>(family_); }
  [[nodiscard]] const FractionalKernel* as_fractional() const {
    return std::get_if<FractionalKernel>(&family_);
  }
  [[nodiscard]] const ExpMAKernel* as_exp_ma() const { return std::get_if<ExpMAKernel>(&family_); }

  /// Construction-time remarks (e.g. gamma >= 1), not errors.
  [[nodiscard]] const std::vector<std::string>& warnings() const { return warnings_; }

  /// Throws ConfigError when per-point parameter lists do not match the model size.
  void validate_for(std::size_t mixing_points) const;

  [[nodiscard]] double phi(double t, double s, std::size_t v) const;
  /// phi(s, s, v); equals f(0, v) for SIMMA kernels.
  [[nodiscard]] double diag(double s, std::size_t v) const;

  /// f(s, v) and f0(s, v); throw UnsupportedError for a general phi.
  [[nodiscard]] double f(double s, std::size_t v) const;
  [[nodiscard]] double f0(double s, std::size_t v) const;
  /// f(s, v) - f(0, v) 1{s >= 0}.
  [[nodiscard]] double g(double s, std::size_t v) const;
  [[nodiscard]] double jump_height(std::size_t v) const { return f(0.0, v); }

  [[nodiscard]] bool has_derivative() const;
  /// Declared derivative of f at t > 0; nullopt when none is declared.
  [[nodiscard]] std::optional<double> fdot(double t, std::size_t v) const;

  /// Times t > 0 with |fdot(t, v)| == level, when known analytically. Used as
  /// quadrature split points for the kink of (|x fdot| ^ |x fdot|^2).
  [[nodiscard]] std::vector<double> fdot_level_crossings(double level, std::size_t v) const;

  /// Points s >= 0 where f(., v) or its derivative is not smooth.
  [[nodiscard]] std::vector<double> breakpoints(std::size_t v) const;

  /// Per-point parameter of Fractional/ExpMA, broadcasting a single value.
  [[nodiscard]] double gamma(std::size_t v) const;
  [[nodiscard]] double theta(std::size_t v) const;

 private:
  KernelFamily family_;
  std::vector<std::string> warnings_;
};

struct GSplit {
  std::function<double(double, std::size_t)> g;
  std::vector<double> jump_height;
};

/// g(s, v) = f(s, v) - f(0, v) 1{s >= 0} with the jump heights f(0, v).
/// Throws UnsupportedError for a general phi.
GSplit g_split(const KernelSpec& kernel, std::size_t mixing_points);

/// |f(b, v) - f(a, v) - integral of fdot over [a, b]|, for validating a
/// declared derivative.
double derivative_mismatch(const KernelSpec& kernel, std::size_t v, double a, double b);

}  // namespace idsm
