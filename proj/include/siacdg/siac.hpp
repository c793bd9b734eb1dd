#ifndef SIACDG_SIAC_HPP_
#define SIACDG_SIAC_HPP_

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <optional>

#include "siacdg/mesh.hpp"

namespace siacdg {

/// SIAC kernel parameters: a combination of `moments` (= r+1) shifted central
/// B-splines of order `spline_order`, scaled by `scaling` (= H). The kernel
/// support width is (r + spline_order) * H. `line_angle` selects the line
/// direction for 2D line filtering.
struct KernelSpec {
  int moments = 1;        // r + 1
  int spline_order = 1;   // ell
  double scaling = 1.0;   // H, in physical units
  std::optional<double> line_angle;  // radians, 2D only

  int r() const { return moments - 1; }
  double support_width() const { return (r() + spline_order) * scaling; }
};

/// Central B-spline of order ell >= 1; B^1 is the indicator of [-1/2, 1/2),
/// higher orders by the convolution recurrence. Support is [-ell/2, ell/2].
double bspline(int ell, double t);

/// Coefficients c_0..c_r of the kernel sum_g c_g B^ell(x + r/2 - g) solving
/// the consistency + moment conditions  int K x^k = delta_{0k}, k = 0..r.
/// Moment integrals are evaluated by exact piecewise Gauss-Legendre
/// quadrature on the spline knot intervals. Throws if the system is singular.
Eigen::VectorXd kernel_coefficients(int r, int ell);

/// Closed-form Fourier response of the scaled kernel; equals 1 at k = 0 and
/// has its first r derivatives equal to zero there.
double kernel_fourier(const KernelSpec& spec, double k);

/// Discrete filtering matrix. Stored as sparse rows (periodic wrap resolved
/// at assembly); the conservation correction K_corr = K - 1 v^T is kept as
/// the rank-one vector `mass_fix` so applications stay sparse.
struct FilterOperator {
  Eigen::SparseMatrix<double, Eigen::RowMajor> matrix;
  Eigen::VectorXd mass_fix;  // v; empty when no correction attached
  bool conservative = false;
  KernelSpec spec;

  int rows() const { return static_cast<int>(matrix.rows()); }

  Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& u) const;

  /// Effective entry (K - 1 v^T)(i,j).
  double entry(int i, int j) const;
};

/// Row-by-row discrete 1D filter: row for node x holds the exact integrals
/// of K_H(x - y) against every Lagrange basis function whose element
/// intersects the (periodically wrapped) kernel support. Integration splits
/// at element interfaces and kernel knots, Gauss-Legendre on each piece.
FilterOperator assemble_filter_1d(const KernelSpec& spec, const GlobalLayout& layout);

/// Line-SIAC filter for 2D layouts: 1D quadrature along the line through
/// each node with direction (cos t, sin t), t = spec.line_angle. Breakpoints
/// at kernel knots and every element-boundary crossing of the line.
FilterOperator assemble_lsiac_2d(const KernelSpec& spec, const GlobalLayout& layout);

/// Volume-weighted rank-one conservation correction
/// K_corr = K - (1 1^T / 1^T M 1) M (K - I); preserves consistency K 1 = 1
/// and is idempotent.
FilterOperator conservation_correction(const FilterOperator& filter, const GlobalLayout& layout);

/// Block-diagonal per-element averaging filter 1 1^T M_e / (1^T M_e 1); the
/// filter underlying the element-local correction. Conservative as built.
FilterOperator local_average_filter(const GlobalLayout& layout);

}  // namespace siacdg

#endif  // SIACDG_SIAC_HPP_
