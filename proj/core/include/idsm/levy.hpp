#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "idsm/quadrature.hpp"

namespace idsm {

/// Truncation function [[x]] = x / max(|x|, 1).
double truncate(double x);

/// Symmetric alpha-stable: density c |x|^(-alpha-1) on both half lines.
struct StableParams {
  double alpha;
  double c;
};

/// Symmetric tempered stable: density c |x|^(-alpha-1) exp(-lambda |x|).
struct TemperedStableParams {
  double alpha;
  double c;
  double lambda;
};

/// Mass `mass` at `position`; the symmetric variant adds the mirror atom at -position.
struct PointMassParams {
  double position;
  double mass;
};

/// User supplied density. Symmetry and power-law indices are declared, never
/// inferred: density ~ |x|^(-1-small_jump_index) near 0 and
/// ~ |x|^(-1-large_jump_index) at infinity (use +inf for lighter tails).
struct CustomParams {
  std::function<double(double)> density;
  std::optional<double> small_jump_index;
  std::optional<double> large_jump_index;
};

using LevyFamily = std::variant<StableParams, TemperedStableParams, PointMassParams, CustomParams>;

/// One-dimensional Levy measure rho. Immutable after construction.
class LevyMeasure1D {
 public:
  static LevyMeasure1D stable(double alpha, double c);
  static LevyMeasure1D tempered_stable(double alpha, double c, double lambda);
  static LevyMeasure1D point_mass(double position, double mass, bool symmetric = false);
  static LevyMeasure1D custom(std::function<double(double)> density, bool symmetric,
                              std::optional<double> small_jump_index = std::nullopt,
                              std::optional<double> large_jump_index = std::nullopt);

  [[nodiscard]] const LevyFamily& family() const { return family_; }
  [[nodiscard]] bool symmetric() const { return symmetric_; }
  [[nodiscard]] std::string family_name() const;

  [[nodiscard]] const StableParams* as_stable() const { return std::get_if<StableParams>(&family_); }
  [[nodiscard]] const TemperedStableParams* as_tempered() const {
    return std::get_if<TemperedStableParams>(&family_);
  }
  [[nodiscard]] const PointMassParams* as_point_mass() const {
    return std::get_if<PointMassParams>(&family_);
  }
  [[nodiscard]] const CustomParams* as_custom() const { return std::get_if<CustomParams>(&family_); }

  /// Density at x != 0, or nullopt for purely atomic measures.
  [[nodiscard]] std::optional<double> density(double x) const;

  /// rho((x, inf)) for x > 0.
  [[nodiscard]] double tail_plus(double x) const;
  /// rho((-inf, -x)) for x > 0.
  [[nodiscard]] double tail_minus(double x) const;

  /// Small-jump index beta (density ~ |x|^(-1-beta) at 0); nullopt when unknown.
  [[nodiscard]] std::optional<double> small_jump_index() const;
  /// Large-jump index eta (density ~ |x|^(-1-eta) at infinity); +inf for
  /// exponentially light or bounded support, nullopt when unknown.
  [[nodiscard]] std::optional<double> large_jump_index() const;

 private:
  LevyMeasure1D(LevyFamily family, bool symmetric) : family_(std::move(family)), symmetric_(symmetric) {}

  LevyFamily family_;
  bool symmetric_;
};

/// One point of the finite mixing space V.
struct MixingPoint {
  std::string label;
  double weight = 1.0;             // m({v}) > 0
  double drift = 0.0;              // b(v)
  double gaussian_variance = 0.0;  // sigma^2(v) >= 0
  LevyMeasure1D levy = LevyMeasure1D::stable(1.5, 1.0);
};

/// Characteristics of the stationary random measure Lambda with control
/// measure ds x m(dv) over a finite V.
class ModelSpec {
 public:
  explicit ModelSpec(std::vector<MixingPoint> points);

  [[nodiscard]] std::size_t size() const { return points_.size(); }
  [[nodiscard]] const MixingPoint& point(std::size_t v) const { return points_.at(v); }
  [[nodiscard]] const std::vector<MixingPoint>& points() const { return points_; }
  [[nodiscard]] double total_weight() const;
  [[nodiscard]] bool all_symmetric() const;

 private:
  std::vector<MixingPoint> points_;
};

/// Single-point model convenience.
ModelSpec single_point_model(LevyMeasure1D levy, double drift = 0.0, double gaussian_variance = 0.0);

/// Generalized inverse of the tail: for s > 0, inf{x > 0 : rho(x, inf) <= s};
/// for s < 0, sup{x < 0 : rho(-inf, x) <= -s}. Returns 0 when the relevant
/// tail mass never exceeds |s| (finite activity exhausted). Throws
/// ConfigError for s == 0.
double tail_quantile(const LevyMeasure1D& rho, double s);

/// B(x, v) = x b(v) + integral of ([[x y]] - x [[y]]) rho_v(dy).
QuadResult b_kernel(double x, std::size_t v, const ModelSpec& model,
                    const QuadratureConfig& config = {});

/// K(x, v) = x^2 sigma^2(v) + integral of [[x y]]^2 rho_v(dy).
QuadResult k_kernel(double x, std::size_t v, const ModelSpec& model,
                    const QuadratureConfig& config = {});

/// Integral of g against rho over R \ {0}. `splits` are |x| locations where g
/// is non-smooth; they are mirrored to the negative half line.
QuadResult integrate_levy(const LevyMeasure1D& rho, const std::function<double(double)>& g,
                          const std::vector<double>& splits, const QuadratureConfig& config = {});

/// Same as integrate_levy but restricted to lo <= |x| <= hi.
QuadResult integrate_levy_band(const LevyMeasure1D& rho, const std::function<double(double)>& g,
                               double lo, double hi, const std::vector<double>& splits,
                               const QuadratureConfig& config = {});

/// Integral of (1 ^ x^2) rho(dx); finite for every Levy measure.
QuadResult levy_integrability(const LevyMeasure1D& rho, const QuadratureConfig& config = {});

/// Integral of |x|^p rho(dx): closed form for the builtin families,
/// quadrature for custom densities.
QuadResult power_moment(const LevyMeasure1D& rho, double p, const QuadratureConfig& config = {});

/// Integral over |x| < r of x^2 rho(dx).
QuadResult truncated_second_moment(const LevyMeasure1D& rho, double r,
                                   const QuadratureConfig& config = {});

/// Integral of (x - [[x]]) rho(dx), the mean shift of the large jumps.
QuadResult mean_shift(const LevyMeasure1D& rho, const QuadratureConfig& config = {});

/// Upper incomplete gamma function Gamma(s, z) for real s and z > 0.
double upper_incomplete_gamma(double s, double z);

}  // namespace idsm
