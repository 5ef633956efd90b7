#include "idsm/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gaussian.hpp"
#include "idsm/errors.hpp"
#include "idsm/existence.hpp"
#include "idsm/rng.hpp"

namespace idsm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kGaussianStream = 0x6761757373ULL;

std::vector<double> make_grid(const SeriesConfig& config) {
  std::vector<double> grid(config.grid_points);
  const auto last = static_cast<double>(config.grid_points - 1);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    grid[k] = config.horizon * static_cast<double>(k) / last;
  }
  return grid;
}

std::vector<double> window_splits(const KernelSpec& kernel, std::size_t v, double t) {
  std::vector<double> cuts{0.0, t};
  if (kernel.is_simma()) {
    for (double b : kernel.breakpoints(v)) {
      cuts.push_back(t - b);
      cuts.push_back(-b);
    }
  }
  return cuts;
}

double checked(const QuadResult& r, const char* what) {
  if (!r.converged()) {
    throw NumericError(std::string(what) + " integral " + std::string(to_string(r.status)));
  }
  return r.value;
}

void require_symmetric(const ModelSpec& model) {
  for (const auto& p : model.points()) {
    if (!p.levy.symmetric()) {
      throw ConfigError("simulation supports symmetric Levy measures only; rho(" + p.label +
                        ") is asymmetric");
    }
  }
}

// Deterministic part driven by b(v): contributions to X, M and A.
struct DriftPaths {
  std::vector<double> X;
  std::vector<double> M;
  std::vector<double> A;
};

DriftPaths drift_paths(const std::vector<double>& grid, double window_lo, const ModelSpec& model,
                       const KernelSpec& kernel, const QuadratureConfig& quad) {
  DriftPaths d{std::vector<double>(grid.size(), 0.0), std::vector<double>(grid.size(), 0.0),
               std::vector<double>(grid.size(), 0.0)};
  for (std::size_t v = 0; v < model.size(); ++v) {
    const auto& p = model.point(v);
    const double w = p.weight * p.drift;
    if (w == 0.0) {
      continue;
    }
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double t = grid[k];
      const QuadratureConfig cfg = quad.with_splits(window_splits(kernel, v, t));
      d.X[k] += w * checked(integrate([&](double s) { return kernel.phi(t, s, v); }, window_lo, t, cfg),
                            "drift");
      d.M[k] += w * checked(integrate([&](double s) { return kernel.diag(s, v); }, 0.0, t, cfg),
                            "drift shift");
      if (kernel.is_simma()) {
        d.A[k] += w * checked(integrate([&](double s) { return kernel.g(t - s, v) - kernel.g(-s, v); },
                                        window_lo, t, cfg),
                              "drift of A");
      }
    }
  }
  if (!kernel.is_simma()) {
    for (std::size_t k = 0; k < grid.size(); ++k) {
      d.A[k] = d.X[k] - d.X[0] - d.M[k];
    }
  }
  return d;
}

}  // namespace

void SeriesConfig::validate() const {
  if (!(window_past > 0.0) || !std::isfinite(window_past)) {
    throw ConfigError("series.window_past must be > 0");
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw ConfigError("series.horizon must be > 0");
  }
  if (!(gamma_cap > 0.0) || !std::isfinite(gamma_cap)) {
    throw ConfigError("series.gamma_cap must be > 0");
  }
  if (grid_points < 2) {
    throw ConfigError("series.grid_points must be at least 2");
  }
  if (max_terms < 1) {
    throw ConfigError("series.max_terms must be at least 1");
  }
  if (!(max_truncation_ratio > 0.0)) {
    throw ConfigError("series.max_truncation_ratio must be > 0");
  }
}

SeriesState sample_series(const SeriesConfig& config, const ModelSpec& model) {
  config.validate();
  require_symmetric(model);

  SeriesState state;
  state.window_lo = -config.window_past;
  state.window_hi = config.horizon;
  state.h = 1.0 / (2.0 * (config.window_past + config.horizon) * model.total_weight());

  std::vector<double> weights;
  for (const auto& p : model.points()) {
    weights.push_back(p.weight);
  }
  Rng rng(config.seed);
  double gamma = 0.0;
  for (;;) {
    gamma += rng.exponential();
    if (gamma > config.gamma_cap) {
      break;
    }
    if (state.terms() >= config.max_terms) {
      std::ostringstream msg;
      msg << "series.gamma_cap = " << config.gamma_cap << " needs more than max_terms = "
          << config.max_terms << " terms; reduce gamma_cap";
      throw ConfigError(msg.str());
    }
    const int eps = rng.uniform() < 0.5 ? -1 : 1;
    const double t = state.window_lo + (state.window_hi - state.window_lo) * rng.uniform();
    const std::size_t v = rng.categorical(weights);
    state.gamma.push_back(gamma);
    state.epsilon.push_back(eps);
    state.time.push_back(t);
    state.label.push_back(v);
    state.size.push_back(tail_quantile(model.point(v).levy, eps * gamma * state.h));
  }
  return state;
}

std::vector<Jump> extract_jumps(const SeriesState& state, const SeriesConfig& config,
                                const KernelSpec& kernel) {
  std::vector<Jump> jumps;
  for (std::size_t j = 0; j < state.terms(); ++j) {
    const double t = state.time[j];
    if (!(t > 0.0 && t <= config.horizon)) {
      continue;
    }
    const double size = state.size[j] * kernel.diag(t, state.label[j]);
    if (size != 0.0) {
      jumps.push_back({t, size, state.label[j], j});
    }
  }
  std::sort(jumps.begin(), jumps.end(), [](const Jump& a, const Jump& b) { return a.time < b.time; });
  return jumps;
}

PathBundle build_paths(const SeriesState& state, const SeriesConfig& config,
                       const ModelSpec& model, const KernelSpec& kernel,
                       const QuadratureConfig& quad) {
  config.validate();
  kernel.validate_for(model.size());

  PathBundle out;
  out.grid = make_grid(config);
  const std::size_t n = out.grid.size();
  out.X.assign(n, 0.0);
  out.M.assign(n, 0.0);
  out.A_direct.assign(n, 0.0);

  const bool simma = kernel.is_simma();
  for (std::size_t j = 0; j < state.terms(); ++j) {
    const double r = state.size[j];
    if (r == 0.0) {
      continue;
    }
    const double t_atom = state.time[j];
    const std::size_t v = state.label[j];
    const double d = kernel.diag(t_atom, v);
    const double g_past = simma ? kernel.g(-t_atom, v) : 0.0;
    const double phi_zero = kernel.phi(0.0, t_atom, v);
    for (std::size_t k = 0; k < n; ++k) {
      const double t = out.grid[k];
      const double phi = kernel.phi(t, t_atom, v);
      const double diag_term = (t_atom > 0.0 && t_atom <= t) ? d : 0.0;
      out.X[k] += r * phi;
      out.M[k] += r * diag_term;
      out.A_direct[k] += simma ? r * (kernel.g(t - t_atom, v) - g_past)
                               : r * (phi - phi_zero - diag_term);
    }
  }

  bool any_drift = false;
  bool any_gaussian = false;
  for (const auto& p : model.points()) {
    any_drift = any_drift || p.drift != 0.0;
    any_gaussian = any_gaussian || p.gaussian_variance > 0.0;
  }
  if (any_drift) {
    const DriftPaths d = drift_paths(out.grid, state.window_lo, model, kernel, quad);
    out.drift = d.X;
    for (std::size_t k = 0; k < n; ++k) {
      out.X[k] += d.X[k];
      out.M[k] += d.M[k];
      out.A_direct[k] += d.A[k];
    }
  }
  if (any_gaussian) {
    if (n > detail::kMaxGaussianGrid) {
      std::ostringstream msg;
      msg << "series.grid_points must be <= " << detail::kMaxGaussianGrid
          << " when sigma^2 > 0 (dense Gaussian covariance)";
      throw ConfigError(msg.str());
    }
    Rng rng(derive_seed(config.seed, kGaussianStream));
    const auto gp = detail::sample_gaussian(out.grid, state.window_lo, model, kernel, quad, rng);
    out.G = gp.X;
    for (std::size_t k = 0; k < n; ++k) {
      out.X[k] += gp.X[k];
      out.M[k] += gp.M[k];
      out.A_direct[k] += gp.X[k] - gp.X[0] - gp.M[k];
    }
  }

  out.X0 = out.X[0];
  out.A.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.A[k] = out.X[k] - out.X0 - out.M[k];
  }
  out.jumps = extract_jumps(state, config, kernel);
  return out;
}

TruncationBounds truncation_bounds(const SeriesConfig& config, const ModelSpec& model,
                                   const KernelSpec& kernel, const QuadratureConfig& quad) {
  config.validate();
  kernel.validate_for(model.size());
  const double t = config.horizon;
  const double lo = -config.window_past;

  const QuadResult past = k_window_integral(kernel, model, t, -kInf, lo, quad);
  if (!past.converged()) {
    throw ConfigError("the K-integral over the infinite past " + std::string(to_string(past.status)) +
                      ": X is not well defined for this kernel and model");
  }
  const QuadResult scale = k_window_integral(kernel, model, t, lo, t, quad);

  const double h = 1.0 / (2.0 * (config.window_past + config.horizon) * model.total_weight());
  double tail2 = 0.0;
  for (std::size_t v = 0; v < model.size(); ++v) {
    const auto& p = model.point(v);
    const double cutoff = std::abs(tail_quantile(p.levy, config.gamma_cap * h));
    if (cutoff == 0.0) {
      continue;
    }
    const double small = checked(truncated_second_moment(p.levy, cutoff, quad), "small-jump moment");
    const QuadratureConfig cfg = quad.with_splits(window_splits(kernel, v, t));
    const double l2 = checked(integrate(
                                  [&](double s) {
                                    const double phi = kernel.phi(t, s, v);
                                    return phi * phi;
                                  },
                                  lo, t, cfg),
                              "kernel L2");
    tail2 += p.weight * l2 * small;
  }

  TruncationBounds b;
  b.past = std::sqrt(past.value);
  b.scale = std::sqrt(scale.value);
  b.series_tail = std::sqrt(tail2);
  b.total = b.past + b.series_tail;
  if (b.scale > 0.0 && b.past > config.max_truncation_ratio * b.scale) {
    std::ostringstream msg;
    msg << "series.window_past = " << config.window_past << " omits too much of the past: bound "
        << b.past << " exceeds max_truncation_ratio (" << config.max_truncation_ratio
        << ") x scale " << b.scale << "; enlarge window_past or raise max_truncation_ratio";
    throw ConfigError(msg.str());
  }
  return b;
}

int max_refinement_level(const PathBundle& path) {
  if (path.grid.size() < 2) {
    return 0;
  }
  const std::size_t cells = path.grid.size() - 1;
  if ((cells & (cells - 1)) != 0) {
    return 0;
  }
  int level = 0;
  while ((std::size_t{1} << level) < cells) {
    ++level;
  }
  return level;
}

double realized_variation(const PathBundle& path, PathComponent which, int order, int level) {
  if (order != 1 && order != 2) {
    throw ConfigError("realized_variation: order must be 1 or 2");
  }
  if (level < 0 || level > max_refinement_level(path)) {
    throw ConfigError("realized_variation: refinement level exceeds the grid resolution");
  }
  const std::vector<double>& y = which == PathComponent::X   ? path.X
                                 : which == PathComponent::M ? path.M
                                                             : path.A;
  const std::size_t step = (path.grid.size() - 1) >> level;
  double total = 0.0;
  for (std::size_t k = step; k < y.size(); k += step) {
    const double inc = y[k] - y[k - step];
    total += order == 1 ? std::abs(inc) : inc * inc;
  }
  return total;
}

double max_decomposition_residual(const PathBundle& path) {
  double worst = 0.0;
  for (std::size_t k = 0; k < path.X.size(); ++k) {
    worst = std::max(worst, std::abs(path.X[k] - path.X0 - path.M[k] - path.A[k]));
  }
  return worst;
}

double a_route_disagreement(const PathBundle& path) {
  double worst = 0.0;
  for (std::size_t k = 0; k < path.A.size(); ++k) {
    worst = std::max(worst, std::abs(path.A[k] - path.A_direct[k]));
  }
  return worst;
}

double path_scale(const PathBundle& path) {
  double worst = 0.0;
  for (double x : path.X) {
    worst = std::max(worst, std::abs(x));
  }
  return worst;
}

std::size_t bracketing_cell(const PathBundle& path, double time) {
  const std::size_t cells = path.grid.size() - 1;
  const double dt = path.grid.back() / static_cast<double>(cells);
  auto k = static_cast<std::size_t>(std::max(0.0, std::ceil(time / dt) - 1.0));
  k = std::min(k, cells - 1);
  while (k > 0 && path.grid[k] >= time) {
    --k;
  }
  while (k + 1 < cells && path.grid[k + 1] < time) {
    ++k;
  }
  return k;
}

double jump_interference_bound(const SeriesState& state, const PathBundle& path,
                               const KernelSpec& kernel, const Jump& jump) {
  const std::size_t k = bracketing_cell(path, jump.time);
  const double t0 = path.grid[k];
  const double t1 = path.grid[k + 1];
  double bound = 0.0;
  for (std::size_t i = 0; i < state.terms(); ++i) {
    const double r = state.size[i];
    if (r == 0.0) {
      continue;
    }
    const std::size_t v = state.label[i];
    if (i == jump.term) {
      bound += std::abs(r) * std::abs(kernel.phi(t1, state.time[i], v) - kernel.diag(state.time[i], v));
      continue;
    }
    bound += std::abs(r) * std::abs(kernel.phi(t1, state.time[i], v) - kernel.phi(t0, state.time[i], v));
  }
  if (!path.drift.empty()) {
    bound += std::abs(path.drift[k + 1] - path.drift[k]);
  }
  if (path.has_gaussian()) {
    bound += std::abs(path.G[k + 1] - path.G[k]);
  }
  return bound;
}

}  // namespace idsm
