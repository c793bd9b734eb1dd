#include "siacdg/dg.hpp"

#include <cmath>
#include <stdexcept>

namespace siacdg {

double burgers_flux(double u) { return 0.5 * u * u; }
double burgers_entropy_flux(double u) { return u * u * u / 3.0; }
double burgers_entropy_potential(double u) { return u * u * u / 6.0; }

double numerical_flux(double uL, double uR, FluxKind kind) {
  const double central = 0.5 * (burgers_flux(uL) + burgers_flux(uR));
  if (kind == FluxKind::Central) return central;
  const double alpha = std::max(std::abs(uL), std::abs(uR));
  return central + 0.5 * alpha * (uL - uR);
}

double numerical_entropy_flux(double uL, double uR, FluxKind kind) {
  const double w_avg = 0.5 * (uL + uR);
  const double psi_avg = 0.5 * (burgers_entropy_potential(uL) + burgers_entropy_potential(uR));
  return w_avg * numerical_flux(uL, uR, kind) - psi_avg;
}

namespace {

void check_state(const SolutionField& u) {
  if (u.layout == nullptr) throw std::invalid_argument("dg: field has no layout");
  if (!u.values.allFinite()) throw std::invalid_argument("dg: non-finite state");
}

// Conservation-form tendency r with du/dt = r for a periodic 1D scalar law,
// from nodal fluxes and interface values:
//   r_e = (2/dx) M^{-1} (D^T M f_e - B f^num_e).
template <class Flux, class NumFlux>
Eigen::VectorXd residual_1d_core(const GlobalLayout& L, const Eigen::VectorXd& u, Flux flux,
                                 NumFlux numflux) {
  const int np = L.p + 1;
  const int n_elm = L.nex;
  const Eigen::VectorXd& w = L.basis.rule.weights;
  const Eigen::MatrixXd& d = L.basis.diff;
  const double scale = 2.0 / L.dx;

  // fnum(e) lives on the left face of element e.
  Eigen::VectorXd fnum(n_elm);
  for (int e = 0; e < n_elm; ++e) {
    const int em1 = (e + n_elm - 1) % n_elm;
    fnum(e) = numflux(u(L.node_index(em1, np - 1)), u(L.node_index(e, 0)));
  }

  Eigen::VectorXd r(L.n_global);
  Eigen::VectorXd f(np);
  for (int e = 0; e < n_elm; ++e) {
    const int z0 = L.node_index(e, 0);
    for (int k = 0; k < np; ++k) f(k) = flux(u(z0 + k));
    for (int i = 0; i < np; ++i) {
      double vol = 0.0;
      for (int k = 0; k < np; ++k) vol += d(k, i) * w(k) * f(k);
      double face = 0.0;
      if (i == 0) face = -fnum(e);
      if (i == np - 1) face = fnum((e + 1) % n_elm);
      r(z0 + i) = scale * (vol - face) / w(i);
    }
  }
  return r;
}

// Adds the x- or y-direction tendency of the tensor-product 2D scheme.
template <class Flux, class NumFlux>
void add_residual_2d_dir(const GlobalLayout& L, const Eigen::VectorXd& u, Flux flux,
                         NumFlux numflux, bool x_dir, Eigen::VectorXd& r) {
  const int np = L.p + 1;
  const Eigen::VectorXd& w = L.basis.rule.weights;
  const Eigen::MatrixXd& d = L.basis.diff;
  const double width = x_dir ? L.dx : L.dy;
  const double scale = 2.0 / width;
  const int n_lines = x_dir ? L.ney : L.nex;   // lines orthogonal to the sweep
  const int n_cells = x_dir ? L.nex : L.ney;   // cells along the sweep

  auto node = [&](int cell, int line_elem, int a, int b) {
    return x_dir ? L.node_index2(cell, line_elem, a, b) : L.node_index2(line_elem, cell, b, a);
  };

  Eigen::VectorXd fnum(n_cells);
  Eigen::VectorXd f(np);
  for (int le = 0; le < n_lines; ++le) {
    for (int j = 0; j < np; ++j) {
      for (int c = 0; c < n_cells; ++c) {
        const int cm1 = (c + n_cells - 1) % n_cells;
        fnum(c) = numflux(u(node(cm1, le, np - 1, j)), u(node(c, le, 0, j)));
      }
      for (int c = 0; c < n_cells; ++c) {
        for (int k = 0; k < np; ++k) f(k) = flux(u(node(c, le, k, j)));
        for (int i = 0; i < np; ++i) {
          double vol = 0.0;
          for (int k = 0; k < np; ++k) vol += d(k, i) * w(k) * f(k);
          double face = 0.0;
          if (i == 0) face = -fnum(c);
          if (i == np - 1) face = fnum((c + 1) % n_cells);
          r(node(c, le, i, j)) += scale * (vol - face) / w(i);
        }
      }
    }
  }
}

}  // namespace

Eigen::VectorXd dg_residual_1d(const SolutionField& u, FluxKind kind) {
  check_state(u);
  const GlobalLayout& L = *u.layout;
  if (L.dim != 1) throw std::invalid_argument("dg_residual_1d: layout is not 1D");
  return residual_1d_core(
      L, u.values, [](double v) { return burgers_flux(v); },
      [kind](double a, double b) { return numerical_flux(a, b, kind); });
}

Eigen::VectorXd dg_residual_2d(const SolutionField& u, FluxKind kind) {
  check_state(u);
  const GlobalLayout& L = *u.layout;
  if (L.dim != 2) throw std::invalid_argument("dg_residual_2d: layout is not 2D");
  Eigen::VectorXd r = Eigen::VectorXd::Zero(L.n_global);
  auto flux = [](double v) { return burgers_flux(v); };
  auto nf = [kind](double a, double b) { return numerical_flux(a, b, kind); };
  add_residual_2d_dir(L, u.values, flux, nf, true, r);
  add_residual_2d_dir(L, u.values, flux, nf, false, r);
  return r;
}

Eigen::VectorXd advection_residual_2d(const SolutionField& u, FluxKind kind) {
  check_state(u);
  const GlobalLayout& L = *u.layout;
  if (L.dim != 2) throw std::invalid_argument("advection_residual_2d: layout is not 2D");
  Eigen::VectorXd r = Eigen::VectorXd::Zero(L.n_global);
  auto flux = [](double v) { return v; };
  auto nf = [kind](double a, double b) {
    const double central = 0.5 * (a + b);
    return kind == FluxKind::Central ? central : central + 0.5 * (a - b);
  };
  add_residual_2d_dir(L, u.values, flux, nf, true, r);
  add_residual_2d_dir(L, u.values, flux, nf, false, r);
  return r;
}

Eigen::VectorXd entropy_flux_residual(const SolutionField& u, FluxKind kind) {
  check_state(u);
  const GlobalLayout& L = *u.layout;
  auto flux = [](double v) { return burgers_entropy_flux(v); };
  auto nf = [kind](double a, double b) { return numerical_entropy_flux(a, b, kind); };
  if (L.dim == 1) {
    return -residual_1d_core(L, u.values, flux, nf);
  }
  Eigen::VectorXd r = Eigen::VectorXd::Zero(L.n_global);
  add_residual_2d_dir(L, u.values, flux, nf, true, r);
  add_residual_2d_dir(L, u.values, flux, nf, false, r);
  return -r;
}

FVResult fv_reference(int n_cells, const std::function<double(double)>& u0, double a, double b,
                      double t_final) {
  if (n_cells < 10) throw std::invalid_argument("fv_reference: need at least 10 cells");
  if (b <= a || t_final < 0.0) throw std::invalid_argument("fv_reference: bad domain or time");
  const double dx = (b - a) / n_cells;

  FVResult out;
  out.cell_centers.resize(n_cells);
  out.cell_averages.resize(n_cells);
  // 4-point Gauss cell averages of the initial profile.
  const QuadratureRule avg_rule = gl_rule(4);
  for (int i = 0; i < n_cells; ++i) {
    const double xc = a + (i + 0.5) * dx;
    out.cell_centers(i) = xc;
    double acc = 0.0;
    for (int q = 0; q < avg_rule.size(); ++q) {
      acc += avg_rule.weights(q) * u0(xc + 0.5 * dx * avg_rule.nodes(q));
    }
    out.cell_averages(i) = 0.5 * acc;
  }

  Eigen::VectorXd& u = out.cell_averages;
  Eigen::VectorXd f(n_cells);
  double t = 0.0;
  auto record = [&]() {
    out.times.push_back(t);
    out.mass.push_back(u.sum() * dx);
    out.energy.push_back(0.5 * u.squaredNorm() * dx);
  };
  record();
  while (t < t_final * (1.0 - 1e-14)) {
    const double speed = std::max(u.cwiseAbs().maxCoeff(), 1e-12);
    const double dt = std::min(0.4 * dx / speed, t_final - t);
    for (int i = 0; i < n_cells; ++i) {
      const int im1 = (i + n_cells - 1) % n_cells;
      f(i) = numerical_flux(u(im1), u(i), FluxKind::LocalLaxFriedrichs);
    }
    for (int i = 0; i < n_cells; ++i) {
      u(i) -= dt / dx * (f((i + 1) % n_cells) - f(i));
    }
    t += dt;
    record();
  }
  return out;
}

}  // namespace siacdg
