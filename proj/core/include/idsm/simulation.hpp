#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "idsm/kernels.hpp"
#include "idsm/levy.hpp"
#include "idsm/quadrature.hpp"

namespace idsm {

/// Truncated series representation on the window [-window_past, horizon].
struct SeriesConfig {
  double window_past = 20.0;
  double horizon = 1.0;
  /// Terms with Gamma_j > gamma_cap are dropped.
  double gamma_cap = 1000.0;
  std::size_t max_terms = 10'000'000;
  std::size_t grid_points = 1025;
  std::uint64_t seed = 0;
  /// Largest accepted ratio of the omitted-past bound to the path scale.
  double max_truncation_ratio = 1e-3;

  void validate() const;
};

/// One draw of the series: arrival times Gamma_j, signs, atom locations
/// (time, v) and jump sizes R_j = tail_quantile(rho_v, eps_j Gamma_j h).
struct SeriesState {
  std::vector<double> gamma;
  std::vector<int> epsilon;
  std::vector<double> time;
  std::vector<std::size_t> label;
  std::vector<double> size;
  double h = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;

  [[nodiscard]] std::size_t terms() const { return gamma.size(); }
};

struct Jump {
  double time = 0.0;
  double size = 0.0;
  std::size_t v = 0;
  /// Index of the series term that produced the jump.
  std::size_t term = 0;
};

/// Paths on the grid t_k = horizon * k / (grid_points - 1).
struct PathBundle {
  std::vector<double> grid;
  std::vector<double> X;
  std::vector<double> M;
  /// X - X_0 - M.
  std::vector<double> A;
  /// A from its own series: sum of R_j [g(t - T_j) - g(-T_j)] plus drift terms.
  std::vector<double> A_direct;
  /// Gaussian component of X; empty when sigma^2 = 0 everywhere.
  std::vector<double> G;
  /// Deterministic drift component of X (zero when b = 0).
  std::vector<double> drift;
  std::vector<Jump> jumps;
  double X0 = 0.0;

  [[nodiscard]] bool has_gaussian() const { return !G.empty(); }
};

struct TruncationBounds {
  /// sqrt of the K-integral over s < -window_past at t = horizon.
  double past = 0.0;
  /// Standard-deviation bound of the small jumps dropped by the Gamma cap.
  double series_tail = 0.0;
  /// sqrt of the K-integral over the simulated window, a path scale proxy.
  double scale = 0.0;
  double total = 0.0;
};

/// Throws ConfigError for asymmetric Levy measures, and when the cap would
/// need more than max_terms terms.
SeriesState sample_series(const SeriesConfig& config, const ModelSpec& model);

PathBundle build_paths(const SeriesState& state, const SeriesConfig& config,
                       const ModelSpec& model, const KernelSpec& kernel,
                       const QuadratureConfig& quad = {});

/// Predicted jumps R_j phi(T_j, T_j, v_j) for 0 < T_j <= horizon, sorted by
/// time. Zero-size jumps are omitted.
std::vector<Jump> extract_jumps(const SeriesState& state, const SeriesConfig& config,
                                const KernelSpec& kernel);

/// Throws ConfigError when the omitted past exceeds max_truncation_ratio of
/// the scale, or when the integral over the past diverges.
TruncationBounds truncation_bounds(const SeriesConfig& config, const ModelSpec& model,
                                   const KernelSpec& kernel, const QuadratureConfig& quad = {});

enum class PathComponent { X, M, A };

/// Number of dyadic levels available: log2(grid_points - 1), or 0 when that
/// is not a power of two.
int max_refinement_level(const PathBundle& path);

/// Sum of |increments|^order over the dyadic sub-grid with 2^level cells.
double realized_variation(const PathBundle& path, PathComponent which, int order, int level);

/// max_k |X_k - X_0 - M_k - A_k|.
double max_decomposition_residual(const PathBundle& path);
/// max_k |A_k - A_direct_k|.
double a_route_disagreement(const PathBundle& path);
/// max_k |X_k|.
double path_scale(const PathBundle& path);

/// Grid index k with t_k < time <= t_{k+1}.
std::size_t bracketing_cell(const PathBundle& path, double time);

/// Upper bound on |X_{k+1} - X_k - jump.size| for the cell holding `jump`:
/// contributions of all other atoms, the continuous part of the jumping
/// atom's own kernel, drift and Gaussian increments.
double jump_interference_bound(const SeriesState& state, const PathBundle& path,
                               const KernelSpec& kernel, const Jump& jump);

}  // namespace idsm
