#pragma once

#include <vector>

#include "idsm/kernels.hpp"
#include "idsm/levy.hpp"
#include "idsm/quadrature.hpp"
#include "idsm/rng.hpp"

namespace idsm::detail {

struct GaussianPaths {
  std::vector<double> X;
  std::vector<double> M;
};

/// Exact joint draw of (X^G(t_k), M^G(t_k)) on `grid` from their covariance,
/// with the past truncated at `window_lo`.
GaussianPaths sample_gaussian(const std::vector<double>& grid, double window_lo,
                              const ModelSpec& model, const KernelSpec& kernel,
                              const QuadratureConfig& quad, Rng& rng);

/// Largest grid accepted when a Gaussian component is present.
inline constexpr std::size_t kMaxGaussianGrid = 257;

}  // namespace idsm::detail
