#include "siacdg/mesh.hpp"

#include <stdexcept>

namespace siacdg {

namespace {

double min_node_gap(const QuadratureRule& rule) {
  double g = 2.0;
  for (int k = 0; k + 1 < rule.size(); ++k) {
    g = std::min(g, rule.nodes(k + 1) - rule.nodes(k));
  }
  return g;
}

}  // namespace

GlobalLayout build_layout(const Mesh1D& mesh, const NodalBasis& basis) {
  if (mesh.n_elements < 1 || mesh.b <= mesh.a) {
    throw std::invalid_argument("build_layout: invalid 1D mesh");
  }
  GlobalLayout layout(basis);
  layout.dim = 1;
  layout.p = basis.degree;
  layout.nex = mesh.n_elements;
  layout.ney = 1;
  layout.ax = mesh.a;
  layout.bx = mesh.b;
  layout.dx = mesh.dx();
  layout.nodes_per_elem = basis.degree + 1;
  layout.n_global = layout.nex * layout.nodes_per_elem;
  layout.h_min = 0.5 * layout.dx * min_node_gap(basis.rule);
  layout.measure = mesh.b - mesh.a;

  layout.weights.resize(layout.n_global);
  layout.xcoord.resize(layout.n_global);
  const double half_jac = 0.5 * layout.dx;
  for (int e = 0; e < layout.nex; ++e) {
    for (int k = 0; k <= layout.p; ++k) {
      const int z = layout.node_index(e, k);
      // e + (1+xi)/2 keeps shared interface abscissae bitwise identical.
      layout.xcoord(z) = mesh.a + layout.dx * (e + 0.5 * (1.0 + basis.rule.nodes(k)));
      layout.weights(z) = half_jac * basis.rule.weights(k);
    }
  }
  return layout;
}

GlobalLayout build_layout(const Mesh2D& mesh, const NodalBasis& basis) {
  if (mesh.nx < 1 || mesh.ny < 1 || mesh.b <= mesh.a) {
    throw std::invalid_argument("build_layout: invalid 2D mesh");
  }
  GlobalLayout layout(basis);
  layout.dim = 2;
  layout.p = basis.degree;
  layout.nex = mesh.nx;
  layout.ney = mesh.ny;
  layout.ax = mesh.a;
  layout.bx = mesh.b;
  layout.ay = mesh.a;
  layout.by = mesh.b;
  layout.dx = mesh.dx();
  layout.dy = mesh.dy();
  const int np = basis.degree + 1;
  layout.nodes_per_elem = np * np;
  layout.n_global = layout.nex * layout.ney * layout.nodes_per_elem;
  layout.h_min = 0.5 * std::min(layout.dx, layout.dy) * min_node_gap(basis.rule);
  layout.measure = (mesh.b - mesh.a) * (mesh.b - mesh.a);

  layout.weights.resize(layout.n_global);
  layout.xcoord.resize(layout.n_global);
  layout.ycoord.resize(layout.n_global);
  const double jac = 0.25 * layout.dx * layout.dy;
  for (int ey = 0; ey < layout.ney; ++ey) {
    for (int ex = 0; ex < layout.nex; ++ex) {
      for (int j = 0; j < np; ++j) {
        for (int i = 0; i < np; ++i) {
          const int z = layout.node_index2(ex, ey, i, j);
          layout.xcoord(z) = mesh.a + layout.dx * (ex + 0.5 * (1.0 + basis.rule.nodes(i)));
          layout.ycoord(z) = mesh.a + layout.dy * (ey + 0.5 * (1.0 + basis.rule.nodes(j)));
          layout.weights(z) = jac * basis.rule.weights(i) * basis.rule.weights(j);
        }
      }
    }
  }
  return layout;
}

}  // namespace siacdg
