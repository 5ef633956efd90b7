#pragma once

#include <string>
#include <vector>

#include "idsm/kernels.hpp"
#include "idsm/levy.hpp"
#include "idsm/quadrature.hpp"

namespace idsm {

/// Whether X_t = integral of phi(t, s, v) Lambda(ds, dv) exists.
struct ExistenceReport {
  double t = 0.0;
  /// Sum over v of m(v) * integral over s <= t of |B(phi(t, s, v), v)|.
  QuadResult b_integral;
  /// Sum over v of m(v) * integral over s <= t of K(phi(t, s, v), v).
  QuadResult k_integral;
  bool exists = false;
  std::vector<std::string> notes;
};

ExistenceReport check_existence(const KernelSpec& kernel, const ModelSpec& model, double t,
                                const QuadratureConfig& config = {});

/// Sum over v of m(v) * integral over s in (lo, hi) of K(phi(t, s, v), v);
/// lo may be -inf. Shared by the existence check and the simulation's
/// truncation bounds.
QuadResult k_window_integral(const KernelSpec& kernel, const ModelSpec& model, double t,
                             double lo, double hi, const QuadratureConfig& config = {});

}  // namespace idsm
