#ifndef SIACDG_ANALYSIS_HPP_
#define SIACDG_ANALYSIS_HPP_

#include <functional>
#include <utility>
#include <vector>

#include "siacdg/dg.hpp"

namespace siacdg {

/// Periodic initial profile with derivative (Newton) and value bounds
/// (bisection bracket for the implicit Burgers solution).
struct InitialCondition {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  double min_value = -10.0;
  double max_value = 10.0;
};

/// Pre-shock solution of u_t + (u^2/2)_x = 0 via Newton on
/// g(u) = u - u0(x - u t), bisection fallback. Throws when the residual
/// tolerance cannot be met.
double burgers_exact(const InitialCondition& u0, double x, double t, double tol = 1e-13);

struct ErrorReport {
  double l2 = 0.0;
  double linf = 0.0;
  int points_per_element = 0;
};

/// L2/Linf error against `exact`, sampled at n_pts Gauss-Legendre points per
/// element (1D).
ErrorReport error_norms(const SolutionField& u, const std::function<double(double)>& exact,
                        int n_pts = 17);

/// 2D variant; samples a pts_per_dir x pts_per_dir Gauss-Legendre grid per
/// element (default 36 points).
ErrorReport error_norms_2d(const SolutionField& u,
                           const std::function<double(double, double)>& exact,
                           int pts_per_dir = 6);

/// order_k = log(e_k / e_{k+1}) / log(N_{k+1} / N_k); Ns must increase.
std::vector<double> convergence_order(const std::vector<double>& errors,
                                      const std::vector<int>& Ns);

/// (1^T M u, (1/2) u^T M u).
std::pair<double, double> mass_energy(const SolutionField& u);

}  // namespace siacdg

#endif  // SIACDG_ANALYSIS_HPP_
