#include "gaussian.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "idsm/errors.hpp"

namespace idsm::detail {

namespace {

std::vector<double> splits_for(const KernelSpec& kernel, std::size_t v, double t, double u) {
  std::vector<double> cuts{0.0, t, u};
  if (kernel.is_simma()) {
    for (double b : kernel.breakpoints(v)) {
      cuts.insert(cuts.end(), {t - b, u - b, -b});
    }
  }
  return cuts;
}

double checked(const QuadResult& r, const char* what) {
  if (!r.converged()) {
    throw NumericError(std::string("gaussian covariance: ") + what + " integral " +
                       std::string(to_string(r.status)));
  }
  return r.value;
}

}  // namespace

GaussianPaths sample_gaussian(const std::vector<double>& grid, double window_lo,
                              const ModelSpec& model, const KernelSpec& kernel,
                              const QuadratureConfig& quad, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (std::size_t v = 0; v < model.size(); ++v) {
    const auto& p = model.point(v);
    const double w = p.weight * p.gaussian_variance;
    if (w == 0.0) {
      continue;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const double t = grid[i];
      for (Eigen::Index j = 0; j <= i; ++j) {
        const double u = grid[j];
        const QuadratureConfig cfg = quad.with_splits(splits_for(kernel, v, t, u));
        const double xx = checked(
            integrate([&](double s) { return kernel.phi(t, s, v) * kernel.phi(u, s, v); },
                      window_lo, std::min(t, u), cfg),
            "X-X");
        cov(i, j) += w * xx;
        const double mm = checked(
            integrate([&](double s) { return kernel.diag(s, v) * kernel.diag(s, v); }, 0.0,
                      std::min(t, u), cfg),
            "M-M");
        cov(n + i, n + j) += w * mm;
      }
      for (Eigen::Index j = 0; j < n; ++j) {
        const double u = grid[j];
        const QuadratureConfig cfg = quad.with_splits(splits_for(kernel, v, t, u));
        const double xm = checked(
            integrate([&](double s) { return kernel.phi(t, s, v) * kernel.diag(s, v); }, 0.0,
                      std::min(t, u), cfg),
            "X-M");
        cov(n + j, i) += w * xm;
      }
    }
  }
  cov = cov.selfadjointView<Eigen::Lower>();

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) {
    throw NumericError("gaussian covariance: eigen decomposition failed");
  }
  const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Eigen::VectorXd z(2 * n);
  for (Eigen::Index i = 0; i < 2 * n; ++i) {
    z(i) = rng.normal();
  }
  const Eigen::MatrixXd& q = eig.eigenvectors();
  const Eigen::VectorXd draw = q * root.asDiagonal() * (q.transpose() * z);

  GaussianPaths out;
  out.X.resize(grid.size());
  out.M.resize(grid.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    out.X[i] = draw(i);
    out.M[i] = draw(n + i);
  }
  return out;
}

}  // namespace idsm::detail
