#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "idsm/kernels.hpp"
#include "idsm/levy.hpp"
#include "idsm/quadrature.hpp"

namespace idsm {

enum class Verdict { semimartingale, not_semimartingale, inconclusive };
enum class ConditionRole { sufficient, necessary, gate, info };

std::string to_string(Verdict verdict);
std::string to_string(ConditionRole role);

/// One evaluated condition. `status` is "finite", "infinite", "true",
/// "false", "unknown", "no-derivative" or "not-applicable".
struct ConditionResult {
  std::string id;
  ConditionRole role = ConditionRole::info;
  double value = 0.0;
  bool finite = true;
  std::string status = "finite";
  std::vector<std::pair<std::string, double>> per_label;
  std::string note;
  /// (u, r(u)) samples for the ratio conditions.
  std::vector<std::pair<double, double>> profile;
};

struct SpecialInfo {
  bool evaluated = false;
  bool special = false;
  /// E[M_1] when special.
  double expected_drift = 0.0;
  std::string note;
};

struct VerdictReport {
  Verdict verdict = Verdict::inconclusive;
  std::vector<ConditionResult> conditions;
  std::vector<std::string> reasons;
  SpecialInfo special;

  [[nodiscard]] const ConditionResult* find(const std::string& id) const;
};

struct VerdictOptions {
  /// Apply the closed-form family rules before the general theorems.
  bool closed_form_rules = true;
};

/// Sum over v of m(v) |B(f(0, v), v)|.
ConditionResult check_drift(const ModelSpec& model, const KernelSpec& kernel,
                            const QuadratureConfig& config = {});

/// Sum over v of m(v) sigma^2(v) * integral over (0, inf) of fdot(s, v)^2.
ConditionResult check_int1(const ModelSpec& model, const KernelSpec& kernel,
                           const QuadratureConfig& config = {});

/// Sum over v of m(v) * integral over s > 0 and x of (|x fdot| ^ |x fdot|^2) rho_v(dx).
ConditionResult check_Cf(const ModelSpec& model, const KernelSpec& kernel,
                         const QuadratureConfig& config = {});

/// Per-v version of check_Cf; necessary under the large-u ratio condition.
ConditionResult check_fdot_int(const ModelSpec& model, const KernelSpec& kernel,
                               const QuadratureConfig& config = {});

/// Per-v integral of (|x fdot| ^ |x fdot|^2)(1 ^ x^-2) rho_v(dx) ds.
ConditionResult check_trunc_case(const ModelSpec& model, const KernelSpec& kernel,
                                 const QuadratureConfig& config = {});

/// For every v: sigma^2(v) > 0 or the small jumps have infinite first moment.
/// status "true", "false" or "unknown".
ConditionResult check_necessity_gate(const ModelSpec& model, const QuadratureConfig& config = {});

enum class RatioMode { u0_limsup, u00_sup };

struct RatioProfile {
  std::vector<double> u;
  std::vector<double> r;
  /// max over the top decade (u0) or over the whole grid (u00).
  double value = 0.0;
  bool finite = true;
  std::string note;
};

/// r(u) = u * integral over |x| > u of |x| rho / integral over |x| <= u of x^2 rho
/// on a log grid of `points` values in [u_min, u_max]. `closed_form` uses the
/// analytic tails of the builtin families; otherwise every value is computed
/// by quadrature.
RatioProfile ratio_profile(const LevyMeasure1D& rho, RatioMode mode, bool closed_form = true,
                           double u_min = 1e-4, double u_max = 1e4, int points = 33,
                           const QuadratureConfig& config = {});

/// u0 or u00 over all mixing points, as a condition.
ConditionResult check_ratio(const ModelSpec& model, RatioMode mode,
                            const QuadratureConfig& config = {});

/// Integral of (|x y| ^ |x y|^2) rho(dx). Closed forms for the builtin
/// families unless `closed_form` is false.
QuadResult cf_inner(const LevyMeasure1D& rho, double y, bool closed_form = true,
                    const QuadratureConfig& config = {});

/// C in the stable identity: integral of (|xy| ^ |xy|^2) rho(dx) = C |y|^alpha.
double stable_cf_constant(double alpha, double c);

/// Integral over t in (0, inf) of (|x fdot(t)| ^ |x fdot(t)|^2), by quadrature.
QuadResult kernel_time_integral(const KernelSpec& kernel, std::size_t v, double x,
                                const QuadratureConfig& config = {});

/// C in: integral over t of (|x fdot| ^ |x fdot|^2) = C |x|^(1/(1-gamma)) for
/// fdot = gamma t^(gamma-1), gamma in (0, 1/2).
double fractional_time_constant(double gamma);

VerdictReport verdict(const ModelSpec& model, const KernelSpec& kernel,
                      const VerdictOptions& options = {}, const QuadratureConfig& config = {});

/// Stable JSON document: {verdict, conditions[], reasons[], special}.
std::string report_to_json(const VerdictReport& report, int indent = 2);

}  // namespace idsm
