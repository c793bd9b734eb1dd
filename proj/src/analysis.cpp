#include "siacdg/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "siacdg/basis.hpp"

namespace siacdg {

double burgers_exact(const InitialCondition& u0, double x, double t, double tol) {
  if (t < 0.0) throw std::invalid_argument("burgers_exact: negative time");
  double u = u0.value(x);
  for (int it = 0; it < 50; ++it) {
    const double g = u - u0.value(x - u * t);
    if (std::abs(g) < tol) return u;
    const double dg = 1.0 + t * u0.derivative(x - u * t);
    if (std::abs(dg) < 1e-14) break;
    u -= g / dg;
  }
  {
    const double g = u - u0.value(x - u * t);
    if (std::abs(g) < tol) return u;
  }

  // Bisection fallback on a bracket containing every characteristic value.
  double lo = u0.min_value - 1.0, hi = u0.max_value + 1.0;
  auto g = [&](double v) { return v - u0.value(x - v * t); };
  double glo = g(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (std::abs(gm) < tol) return mid;
    if ((glo < 0.0) == (gm < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  throw std::runtime_error("burgers_exact: no convergence (post-shock evaluation?)");
}

ErrorReport error_norms(const SolutionField& u, const std::function<double(double)>& exact,
                        int n_pts) {
  const GlobalLayout& L = *u.layout;
  if (L.dim != 1) throw std::invalid_argument("error_norms: layout is not 1D");
  const QuadratureRule gl = gl_rule(n_pts);
  const int np = L.p + 1;

  ErrorReport rep;
  rep.points_per_element = n_pts;
  double l2sq = 0.0;
  for (int e = 0; e < L.nex; ++e) {
    const auto ue = u.values.segment(L.node_index(e, 0), np);
    for (int q = 0; q < n_pts; ++q) {
      const double xi = gl.nodes(q);
      const double x = L.ax + L.dx * (e + 0.5 * (1.0 + xi));
      const double diff = L.basis.interpolate(ue, xi) - exact(x);
      l2sq += 0.5 * L.dx * gl.weights(q) * diff * diff;
      rep.linf = std::max(rep.linf, std::abs(diff));
    }
  }
  rep.l2 = std::sqrt(l2sq);
  return rep;
}

ErrorReport error_norms_2d(const SolutionField& u,
                           const std::function<double(double, double)>& exact,
                           int pts_per_dir) {
  const GlobalLayout& L = *u.layout;
  if (L.dim != 2) throw std::invalid_argument("error_norms_2d: layout is not 2D");
  const QuadratureRule gl = gl_rule(pts_per_dir);
  const int np = L.p + 1;

  ErrorReport rep;
  rep.points_per_element = pts_per_dir * pts_per_dir;
  double l2sq = 0.0;
  Eigen::MatrixXd nodal(np, np);
  for (int ey = 0; ey < L.ney; ++ey) {
    for (int ex = 0; ex < L.nex; ++ex) {
      for (int j = 0; j < np; ++j) {
        for (int i = 0; i < np; ++i) {
          nodal(i, j) = u.values(L.node_index2(ex, ey, i, j));
        }
      }
      for (int qy = 0; qy < pts_per_dir; ++qy) {
        const Eigen::VectorXd ly = L.basis.lagrange_values(gl.nodes(qy));
        const double y = L.ay + L.dy * (ey + 0.5 * (1.0 + gl.nodes(qy)));
        for (int qx = 0; qx < pts_per_dir; ++qx) {
          const Eigen::VectorXd lx = L.basis.lagrange_values(gl.nodes(qx));
          const double x = L.ax + L.dx * (ex + 0.5 * (1.0 + gl.nodes(qx)));
          const double val = lx.transpose() * nodal * ly;
          const double diff = val - exact(x, y);
          l2sq += 0.25 * L.dx * L.dy * gl.weights(qx) * gl.weights(qy) * diff * diff;
          rep.linf = std::max(rep.linf, std::abs(diff));
        }
      }
    }
  }
  rep.l2 = std::sqrt(l2sq);
  return rep;
}

std::vector<double> convergence_order(const std::vector<double>& errors,
                                      const std::vector<int>& Ns) {
  if (errors.size() != Ns.size() || errors.size() < 2) {
    throw std::invalid_argument("convergence_order: need matching lists of length >= 2");
  }
  for (std::size_t k = 0; k + 1 < Ns.size(); ++k) {
    if (Ns[k + 1] <= Ns[k]) throw std::invalid_argument("convergence_order: Ns must increase");
  }
  std::vector<double> orders;
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
    orders.push_back(std::log(errors[k] / errors[k + 1]) /
                     std::log(static_cast<double>(Ns[k + 1]) / Ns[k]));
  }
  return orders;
}

std::pair<double, double> mass_energy(const SolutionField& u) {
  const Eigen::VectorXd& w = u.layout->weights;
  return {w.dot(u.values), 0.5 * u.values.dot(w.cwiseProduct(u.values))};
}

}  // namespace siacdg
