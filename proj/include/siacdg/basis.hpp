#ifndef SIACDG_BASIS_HPP_
#define SIACDG_BASIS_HPP_

#include <Eigen/Dense>

namespace siacdg {

/// Quadrature rule on the reference interval [-1,1].
struct QuadratureRule {
  enum class Kind { LGL, GL };
  Eigen::VectorXd nodes;    // strictly increasing
  Eigen::VectorXd weights;  // positive, sum to 2
  Kind kind = Kind::LGL;

  int size() const { return static_cast<int>(nodes.size()); }
};

/// Legendre-Gauss-Lobatto rule with p+1 points (includes both endpoints).
/// Exact for polynomials of degree 2p-1. Supported range: 1 <= p <= 20.
QuadratureRule lgl_rule(int p);

/// n-point Gauss-Legendre rule, exact for degree 2n-1. Supported: 1 <= n <= 40.
QuadratureRule gl_rule(int n);

/// Barycentric weights for the given distinct nodes, normalized to max |w| = 1.
Eigen::VectorXd barycentric_weights(const Eigen::VectorXd& nodes);

/// Differentiation matrix D with D(i,j) = dl_j/dxi at node i, built from the
/// barycentric form. Row sums are exactly zero (negative-sum trick).
Eigen::MatrixXd diff_matrix(const QuadratureRule& rule);

/// Nodal Lagrange basis collocated at LGL points.
struct NodalBasis {
  int degree = 0;
  QuadratureRule rule;       // LGL, degree+1 points
  Eigen::VectorXd bary;      // barycentric weights
  Eigen::MatrixXd diff;      // differentiation matrix

  explicit NodalBasis(int p);

  /// Values of all Lagrange polynomials at a reference point xi.
  Eigen::VectorXd lagrange_values(double xi) const;

  /// Evaluate the interpolant of elementwise nodal data at xi.
  double interpolate(const Eigen::Ref<const Eigen::VectorXd>& nodal, double xi) const;

  /// diag(-1, 0, ..., 0, 1) as a vector; together with M = diag(weights) the
  /// basis satisfies the SBP identity M D + D^T M = B.
  Eigen::VectorXd boundary_diagonal() const;
};

}  // namespace siacdg

#endif  // SIACDG_BASIS_HPP_
