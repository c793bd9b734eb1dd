#ifndef SIACDG_MESH_HPP_
#define SIACDG_MESH_HPP_

#include <Eigen/Dense>

#include "siacdg/basis.hpp"

namespace siacdg {

/// Uniform periodic 1D mesh of [a,b].
struct Mesh1D {
  double a = 0.0;
  double b = 1.0;
  int n_elements = 1;

  double dx() const { return (b - a) / n_elements; }
};

/// Uniform periodic Cartesian mesh of [a,b]^2.
struct Mesh2D {
  double a = 0.0;
  double b = 1.0;
  int nx = 1;
  int ny = 1;

  double dx() const { return (b - a) / nx; }
  double dy() const { return (b - a) / ny; }
};

/// Global degree-of-freedom layout: element-major, node-minor ordering.
/// In 2D 'elements run x-major then y, nodes lexicographic (x fastest).
/// Quadrature weights carry the element Jacobian, so 1^T M 1 = |domain|.
struct GlobalLayout {
  int dim = 1;
  int p = 1;
  int nex = 1;
  int ney = 1;  // 1 in 1D
  double ax = 0.0, bx = 1.0;
  double ay = 0.0, by = 1.0;
  double dx = 1.0, dy = 1.0;
  NodalBasis basis;
  Eigen::VectorXd weights;  // global diagonal quadrature (M_G)
  Eigen::VectorXd xcoord;
  Eigen::VectorXd ycoord;   // empty in 1D
  int n_global = 0;
  int nodes_per_elem = 0;
  double h_min = 0.0;       // (dx/2) * smallest LGL node gap
  double measure = 0.0;     // |domain|

  explicit GlobalLayout(NodalBasis b) : basis(std::move(b)) {}

  int n_elements() const { return nex * ney; }

  int node_index(int e, int k) const { return e * nodes_per_elem + k; }

  int node_index2(int ex, int ey, int i, int j) const {
    return (ey * nex + ex) * nodes_per_elem + j * (p + 1) + i;
  }

  /// Inverse of node_index: (element, local node).
  std::pair<int, int> element_node(int z) const {
    return {z / nodes_per_elem, z % nodes_per_elem};
  }
};

GlobalLayout build_layout(const Mesh1D& mesh, const NodalBasis& basis);
GlobalLayout build_layout(const Mesh2D& mesh, const NodalBasis& basis);

}  // namespace siacdg

#endif  // SIACDG_MESH_HPP_
