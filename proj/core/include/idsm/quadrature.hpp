#pragma once

#include <functional>
#include <string_view>
#include <vector>

namespace idsm {

/// Tolerances and refinement limits for `integrate`.
///
/// Unbounded ranges and singular endpoints are handled with geometric shells:
/// the range is cut into windows whose width grows (towards infinity) or
/// shrinks (towards a finite endpoint) by `window_growth_factor`. The
/// log-log slope of successive shell contributions decides convergence,
/// geometric tail extrapolation and divergence.
struct QuadratureConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  /// Panel budget of the adaptive Gauss-Kronrod rule inside one shell.
  int max_panels = 512;
  double window_growth_factor = 2.0;
  /// Points where the integrand may be singular or non-smooth.
  std::vector<double> split_points;
  /// A shell sequence whose log-log slope stays >= -threshold is divergent.
  double divergence_slope_threshold = 1e-4;

  /// Throws ConfigError on nonpositive tolerances or max_panels < 64.
  void validate() const;

  /// Copy of this configuration with additional split points.
  [[nodiscard]] QuadratureConfig with_splits(const std::vector<double>& extra) const;
};

enum class QuadStatus { converged, diverged, max_refinement };

std::string_view to_string(QuadStatus status);

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  QuadStatus status = QuadStatus::converged;
  /// Log-log slope of the shell contributions that triggered divergence.
  double growth_exponent = 0.0;
  long evaluations = 0;

  [[nodiscard]] bool converged() const { return status == QuadStatus::converged; }
  [[nodiscard]] bool diverged() const { return status == QuadStatus::diverged; }

  /// Sum of two integrals over disjoint ranges. The worse status wins.
  QuadResult& operator+=(const QuadResult& other);
};

/// `weight * result`; a zero weight yields an exact zero even for divergent input.
QuadResult scaled(const QuadResult& result, double weight);

using Integrand = std::function<double(double)>;

/// Integrates `f` over (lo, hi); either bound may be infinite.
///
/// Supported class: piecewise smooth integrands whose behaviour near the
/// split points, near the finite endpoints and at infinity is power-law or
/// faster decaying. A NaN or infinite sample throws NumericError naming the
/// abscissa.
QuadResult integrate(const Integrand& f, double lo, double hi, const QuadratureConfig& config = {});

}  // namespace idsm
