#ifndef SIACDG_DG_HPP_
#define SIACDG_DG_HPP_

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "siacdg/mesh.hpp"

namespace siacdg {

enum class FluxKind { Central, LocalLaxFriedrichs };

/// Global nodal state tied to its layout.
struct SolutionField {
  Eigen::VectorXd values;
  const GlobalLayout* layout = nullptr;
  double time = 0.0;
};

// Burgers flux f(u) = u^2/2 with square entropy U = u^2/2, entropy flux
// F(u) = u^3/3 and entropy potential psi = w f - F = u^3/6.
double burgers_flux(double u);
double burgers_entropy_flux(double u);
double burgers_entropy_potential(double u);

/// Interface flux for Burgers. LLF uses alpha = max(|uL|, |uR|).
double numerical_flux(double uL, double uR, FluxKind kind);

/// Numerical entropy flux F^num = {{w}} f^num - {{psi}} built on top of the
/// interface flux above ({{.}} is the arithmetic trace average).
double numerical_entropy_flux(double uL, double uR, FluxKind kind);

/// Semi-discrete DGSEM tendency r with du/dt = r for periodic 1D Burgers.
Eigen::VectorXd dg_residual_1d(const SolutionField& u, FluxKind kind);

/// Tensor-product DGSEM tendency for 2D Burgers with flux (u^2/2)(1,1).
Eigen::VectorXd dg_residual_2d(const SolutionField& u, FluxKind kind);

/// Constant-velocity (1,1) advection tendency in 2D (LLF reduces to upwind).
Eigen::VectorXd advection_residual_2d(const SolutionField& u, FluxKind kind);

/// DGSEM discretization of the entropy-flux gradient, approximating +dF/dx
/// (1D) or +div F (2D); this is the negated conservation-form residual run
/// on F(u) with the numerical entropy flux at interfaces.
Eigen::VectorXd entropy_flux_residual(const SolutionField& u, FluxKind kind);

/// First-order finite-volume reference solve (LLF flux, forward Euler at
/// CFL 0.4) on n_cells uniform cells of [a,b], periodic.
struct FVResult {
  Eigen::VectorXd cell_centers;
  Eigen::VectorXd cell_averages;
  std::vector<double> times;
  std::vector<double> mass;
  std::vector<double> energy;
};

FVResult fv_reference(int n_cells, const std::function<double(double)>& u0,
                      double a, double b, double t_final);

}  // namespace siacdg

#endif  // SIACDG_DG_HPP_
