#ifndef SIACDG_CORRECTION_HPP_
#define SIACDG_CORRECTION_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <utility>

#include "siacdg/dg.hpp"
#include "siacdg/siac.hpp"

namespace siacdg {

enum class CorrectionModeKind { None, Local, Global, Blend };

struct DissipationParams {
  double c_e = 0.0;
  double c_max = 0.0;
  bool enabled = false;
};

struct CorrectionReport {
  Eigen::VectorXd c;
  double phi = 0.0;        // enforced entropy-rate magnitude (summed over elements for Local)
  double phi_diss = 0.0;   // dissipative magnitude subtracted from phi
  double blend_weight = std::nan("");  // set by the blend mode only
  double rel_magnitude = 0.0;          // ||c||_M / ||r||_M
};

/// Scale-aware denominator guard used by both correction modes.
double denominator_guard(const GlobalLayout& layout, const Eigen::VectorXd& w);

/// Nodal subcell entropy-consistency metric D_h = w .* rhs + dF/dx|_h, zero
/// for entropy-consistent states. `rhs` is the full semi-discrete tendency
/// (r + c when a correction is active).
Eigen::VectorXd subcell_entropy_metric(const SolutionField& u, const Eigen::VectorXd& rhs,
                                       FluxKind kind);

/// Element-local correction c_e = alpha (w - mean_M(w)) enforcing
/// 1^T M_e c_e = 0 and w^T M_e c_e = phi_loc, with phi_loc the element
/// entropy-flux imbalance (optionally reduced by a per-element dissipative
/// magnitude).
CorrectionReport local_correction(const SolutionField& u, const Eigen::VectorXd& r,
                                  FluxKind kind, double eps,
                                  const Eigen::VectorXd* phi_diss_per_elem = nullptr);

/// Filter-based global correction c = alpha (I - K) w with
/// alpha = (target_rate - w^T M r) / (w^T M (I - K) w); K must be
/// conservative so that 1^T M c = 0.
CorrectionReport global_correction(const SolutionField& u, const Eigen::VectorXd& r,
                                   const FilterOperator& filter, double target_rate,
                                   double eps);

/// Minimizer over [0,1] of ||a + theta b||_M (closed-form clamp of the
/// unconstrained least-squares solution; 1/2 when b is degenerate).
double blend_minimizer(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                       const Eigen::VectorXd& weights, bool clamp = true);

/// Convex blend c = theta c1 + (1-theta) c2 minimizing ||D_h||_M.
std::pair<double, Eigen::VectorXd> ls_blend(const Eigen::VectorXd& c1,
                                            const Eigen::VectorXd& c2,
                                            const SolutionField& u,
                                            const Eigen::VectorXd& r, FluxKind kind,
                                            bool clamp = true);

/// Per-element artificial-dissipation coefficient
/// nu_AV = min(nu_E, nu_max) with the entropy-residual viscosity nu_E and
/// first-order cap nu_max.
Eigen::VectorXd artificial_viscosity(const SolutionField& u, const Eigen::VectorXd& rhs,
                                     FluxKind kind, const DissipationParams& params);

/// Per-element dissipative magnitudes (2/dx) (D u)^T M [nu] (D u) and their
/// sum; nu must be nonnegative elementwise.
std::pair<Eigen::VectorXd, double> dissipation_magnitudes(const SolutionField& u,
                                                          const Eigen::VectorXd& nu_per_elem);

/// Everything the time loop needs to evaluate one correction.
struct CorrectionConfig {
  CorrectionModeKind kind = CorrectionModeKind::None;
  const FilterOperator* filter = nullptr;  // Global / Blend
  DissipationParams dissipation;
  bool blend_clamp = true;
};

CorrectionReport compute_correction(const SolutionField& u, const Eigen::VectorXd& r,
                                    FluxKind kind, const CorrectionConfig& config);

}  // namespace siacdg

#endif  // SIACDG_CORRECTION_HPP_
