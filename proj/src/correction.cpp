#include "siacdg/correction.hpp"

#include <cmath>
#include <stdexcept>

namespace siacdg {

namespace {

double weighted_norm(const Eigen::VectorXd& w, const Eigen::VectorXd& v) {
  return std::sqrt(v.dot(w.cwiseProduct(v)));
}

// Signed clamp: keeps the denominator's sign, floors its magnitude at eps.
double guarded(double den, double eps) {
  if (std::abs(den) >= eps) return den;
  return den < 0.0 ? -eps : eps;
}

// Boundary entropy-flux integral -oint n . F^num per element. Face values are
// computed once per face so the periodic sum telescopes to zero exactly.
Eigen::VectorXd boundary_entropy_flux(const SolutionField& u, FluxKind kind) {
  const GlobalLayout& L = *u.layout;
  const Eigen::VectorXd& v = u.values;
  const int np = L.p + 1;
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(L.n_elements());

  if (L.dim == 1) {
    Eigen::VectorXd fnum(L.nex);  // left face of element e
    for (int e = 0; e < L.nex; ++e) {
      const int em1 = (e + L.nex - 1) % L.nex;
      fnum(e) = numerical_entropy_flux(v(L.node_index(em1, np - 1)), v(L.node_index(e, 0)), kind);
    }
    for (int e = 0; e < L.nex; ++e) {
      phi(e) = -(fnum((e + 1) % L.nex) - fnum(e));
    }
    return phi;
  }

  const Eigen::VectorXd& w = L.basis.rule.weights;
  // x-faces: value (c, ey, j) on the left face of cell c in row (ey, j).
  for (int ey = 0; ey < L.ney; ++ey) {
    for (int j = 0; j < np; ++j) {
      Eigen::VectorXd fnum(L.nex);
      for (int c = 0; c < L.nex; ++c) {
        const int cm1 = (c + L.nex - 1) % L.nex;
        fnum(c) = numerical_entropy_flux(v(L.node_index2(cm1, ey, np - 1, j)),
                                         v(L.node_index2(c, ey, 0, j)), kind);
      }
      for (int c = 0; c < L.nex; ++c) {
        phi(ey * L.nex + c) -=
            0.5 * L.dy * w(j) * (fnum((c + 1) % L.nex) - fnum(c));
      }
    }
  }
  // y-faces.
  for (int ex = 0; ex < L.nex; ++ex) {
    for (int i = 0; i < np; ++i) {
      Eigen::VectorXd fnum(L.ney);
      for (int c = 0; c < L.ney; ++c) {
        const int cm1 = (c + L.ney - 1) % L.ney;
        fnum(c) = numerical_entropy_flux(v(L.node_index2(ex, cm1, i, np - 1)),
                                         v(L.node_index2(ex, c, i, 0)), kind);
      }
      for (int c = 0; c < L.ney; ++c) {
        phi(c * L.nex + ex) -=
            0.5 * L.dx * w(i) * (fnum((c + 1) % L.ney) - fnum(c));
      }
    }
  }
  return phi;
}

}  // namespace

double denominator_guard(const GlobalLayout& layout, const Eigen::VectorXd& w) {
  return 1e-14 * (1.0 + w.dot(layout.weights.cwiseProduct(w)));
}

Eigen::VectorXd subcell_entropy_metric(const SolutionField& u, const Eigen::VectorXd& rhs,
                                       FluxKind kind) {
  // D_h = w .* du/dt + dF/dx|_h with w = u for the square entropy.
  return u.values.cwiseProduct(rhs) + entropy_flux_residual(u, kind);
}

CorrectionReport local_correction(const SolutionField& u, const Eigen::VectorXd& r,
                                  FluxKind kind, double eps,
                                  const Eigen::VectorXd* phi_diss_per_elem) {
  const GlobalLayout& L = *u.layout;
  const Eigen::VectorXd& w = u.values;  // entropy variable
  const int npe = L.nodes_per_elem;
  const Eigen::VectorXd phi_face = boundary_entropy_flux(u, kind);

  CorrectionReport rep;
  rep.c.resize(L.n_global);
  double phi_total = 0.0;
  for (int e = 0; e < L.n_elements(); ++e) {
    const int z0 = L.node_index(e, 0);
    const auto me = L.weights.segment(z0, npe);
    const auto we = w.segment(z0, npe);
    const auto re = r.segment(z0, npe);

    const double vol = me.sum();
    const double mw = me.dot(we);
    const double mean = mw / vol;
    const double den = me.dot(we.cwiseProduct(we)) - mw * mw / vol;

    double phi = phi_face(e) - me.dot(we.cwiseProduct(re));
    if (phi_diss_per_elem != nullptr) phi -= (*phi_diss_per_elem)(e);
    phi_total += phi;

    const double alpha = phi / guarded(den, eps);
    rep.c.segment(z0, npe) = alpha * (we.array() - mean).matrix();
  }
  rep.phi = phi_total;
  const double rn = weighted_norm(L.weights, r);
  rep.rel_magnitude = rn > 0.0 ? weighted_norm(L.weights, rep.c) / rn : 0.0;
  return rep;
}

CorrectionReport global_correction(const SolutionField& u, const Eigen::VectorXd& r,
                                   const FilterOperator& filter, double target_rate,
                                   double eps) {
  const GlobalLayout& L = *u.layout;
  if (!filter.conservative) {
    throw std::invalid_argument("global_correction: filter must be conservative");
  }
  const Eigen::VectorXd& w = u.values;
  const Eigen::VectorXd dev = w - filter.apply(w);  // (I - K) w
  const double den = w.dot(L.weights.cwiseProduct(dev));
  const double phi = target_rate - w.dot(L.weights.cwiseProduct(r));
  const double alpha = phi / guarded(den, eps);

  CorrectionReport rep;
  rep.c = alpha * dev;
  rep.phi = phi;
  const double rn = weighted_norm(L.weights, r);
  rep.rel_magnitude = rn > 0.0 ? weighted_norm(L.weights, rep.c) / rn : 0.0;
  return rep;
}

double blend_minimizer(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                       const Eigen::VectorXd& weights, bool clamp) {
  const double bmb = b.dot(weights.cwiseProduct(b));
  const double ama = a.dot(weights.cwiseProduct(a));
  if (bmb <= 1e-28 * std::max(1.0, ama)) return 0.5;
  const double theta = -b.dot(weights.cwiseProduct(a)) / bmb;
  if (!clamp) return theta;
  return std::min(1.0, std::max(0.0, theta));
}

std::pair<double, Eigen::VectorXd> ls_blend(const Eigen::VectorXd& c1,
                                            const Eigen::VectorXd& c2,
                                            const SolutionField& u,
                                            const Eigen::VectorXd& r, FluxKind kind,
                                            bool clamp) {
  // D_h(theta) = a + theta b with a the metric of the c2-corrected tendency.
  const Eigen::VectorXd a = subcell_entropy_metric(u, r + c2, kind);
  const Eigen::VectorXd b = u.values.cwiseProduct(c1 - c2);
  const double theta = blend_minimizer(a, b, u.layout->weights, clamp);
  return {theta, c2 + theta * (c1 - c2)};
}

Eigen::VectorXd artificial_viscosity(const SolutionField& u, const Eigen::VectorXd& rhs,
                                     FluxKind kind, const DissipationParams& params) {
  const GlobalLayout& L = *u.layout;
  if (!params.enabled) return Eigen::VectorXd::Zero(L.n_elements());
  const Eigen::VectorXd dh = subcell_entropy_metric(u, rhs, kind);
  // Roundoff floor for the sensor: residual noise on constant states must
  // not be amplified by the 1e-14 deviation floor below.
  const double u_inf = u.values.cwiseAbs().maxCoeff();
  const double dh_floor = 1e-10 * (1.0 + u_inf) * (1.0 + u_inf) * (1.0 + u_inf) / L.dx;

  const Eigen::VectorXd& v = u.values;
  const double u_mean_sq = v.dot(L.weights.cwiseProduct(v)) / L.weights.sum();
  const double u_bar_energy = 0.5 * u_mean_sq;
  double dev = 0.0;
  for (int z = 0; z < L.n_global; ++z) {
    dev = std::max(dev, std::abs(0.5 * v(z) * v(z) - u_bar_energy));
  }
  dev += 1e-14;

  const int npe = L.nodes_per_elem;
  Eigen::VectorXd nu(L.n_elements());
  for (int e = 0; e < L.n_elements(); ++e) {
    const int z0 = L.node_index(e, 0);
    double max_dh = dh.segment(z0, npe).cwiseAbs().maxCoeff();
    if (max_dh < dh_floor) max_dh = 0.0;
    const double max_u = v.segment(z0, npe).cwiseAbs().maxCoeff();
    const double nu_e = params.c_e * L.h_min * L.h_min * max_dh / dev;
    const double nu_max = params.c_max * L.dx * max_u;  // |f'(u)| = |u|
    nu(e) = std::min(nu_e, nu_max);
  }
  return nu;
}

std::pair<Eigen::VectorXd, double> dissipation_magnitudes(const SolutionField& u,
                                                          const Eigen::VectorXd& nu_per_elem) {
  const GlobalLayout& L = *u.layout;
  if ((nu_per_elem.array() < 0.0).any()) {
    throw std::invalid_argument("dissipation_magnitudes: negative viscosity");
  }
  const int np = L.p + 1;
  const Eigen::VectorXd& w = L.basis.rule.weights;
  const Eigen::MatrixXd& d = L.basis.diff;
  Eigen::VectorXd phi(L.n_elements());

  if (L.dim == 1) {
    for (int e = 0; e < L.nex; ++e) {
      const auto ue = u.values.segment(L.node_index(e, 0), np);
      const Eigen::VectorXd du = d * ue;
      phi(e) = (2.0 / L.dx) * nu_per_elem(e) * du.dot(w.cwiseProduct(du));
    }
  } else {
    // Quadrature of nu |grad u|^2 over each element.
    for (int ey = 0; ey < L.ney; ++ey) {
      for (int ex = 0; ex < L.nex; ++ex) {
        double acc = 0.0;
        for (int j = 0; j < np; ++j) {
          for (int i = 0; i < np; ++i) {
            double ddx = 0.0, ddy = 0.0;
            for (int k = 0; k < np; ++k) {
              ddx += d(i, k) * u.values(L.node_index2(ex, ey, k, j));
              ddy += d(j, k) * u.values(L.node_index2(ex, ey, i, k));
            }
            ddx *= 2.0 / L.dx;
            ddy *= 2.0 / L.dy;
            acc += 0.25 * L.dx * L.dy * w(i) * w(j) * (ddx * ddx + ddy * ddy);
          }
        }
        phi(ey * L.nex + ex) = nu_per_elem(ey * L.nex + ex) * acc;
      }
    }
  }
  return {phi, phi.sum()};
}

CorrectionReport compute_correction(const SolutionField& u, const Eigen::VectorXd& r,
                                    FluxKind kind, const CorrectionConfig& config) {
  const GlobalLayout& L = *u.layout;
  if (config.kind == CorrectionModeKind::None) {
    CorrectionReport rep;
    rep.c = Eigen::VectorXd::Zero(L.n_global);
    return rep;
  }
  const double eps = denominator_guard(L, u.values);

  if (!config.dissipation.enabled) {
    switch (config.kind) {
      case CorrectionModeKind::Local:
        return local_correction(u, r, kind, eps);
      case CorrectionModeKind::Global:
        return global_correction(u, r, *config.filter, 0.0, eps);
      case CorrectionModeKind::Blend: {
        CorrectionReport g = global_correction(u, r, *config.filter, 0.0, eps);
        CorrectionReport l = local_correction(u, r, kind, eps);
        auto [theta, c] = ls_blend(g.c, l.c, u, r, kind, config.blend_clamp);
        CorrectionReport rep;
        rep.c = std::move(c);
        rep.phi = g.phi;
        rep.blend_weight = theta;
        const double rnorm = weighted_norm(L.weights, r);
        rep.rel_magnitude = rnorm > 0.0 ? weighted_norm(L.weights, rep.c) / rnorm : 0.0;
        return rep;
      }
      default:
        break;
    }
  }

  // Dissipative path: size the viscosity from the energy-conserving tendency,
  // then rebuild the correction with the reduced target.
  auto conservative = [&](CorrectionModeKind kind_sel) {
    return kind_sel == CorrectionModeKind::Local
               ? local_correction(u, r, kind, eps)
               : global_correction(u, r, *config.filter, 0.0, eps);
  };
  const CorrectionModeKind base =
      config.kind == CorrectionModeKind::Local ? CorrectionModeKind::Local
                                               : CorrectionModeKind::Global;
  const CorrectionReport c0 = conservative(base);
  const Eigen::VectorXd nu = artificial_viscosity(u, r + c0.c, kind, config.dissipation);
  auto [phi_vec, phi_tot] = dissipation_magnitudes(u, nu);

  CorrectionReport rep;
  switch (config.kind) {
    case CorrectionModeKind::Local:
      rep = local_correction(u, r, kind, eps, &phi_vec);
      break;
    case CorrectionModeKind::Global:
      rep = global_correction(u, r, *config.filter, -phi_tot, eps);
      break;
    case CorrectionModeKind::Blend: {
      CorrectionReport g = global_correction(u, r, *config.filter, -phi_tot, eps);
      CorrectionReport l = local_correction(u, r, kind, eps, &phi_vec);
      auto [theta, c] = ls_blend(g.c, l.c, u, r, kind, config.blend_clamp);
      rep.c = std::move(c);
      rep.phi = g.phi;
      rep.blend_weight = theta;
      const double rnorm = weighted_norm(L.weights, r);
      rep.rel_magnitude = rnorm > 0.0 ? weighted_norm(L.weights, rep.c) / rnorm : 0.0;
      break;
    }
    default:
      break;
  }
  rep.phi_diss = phi_tot;
  return rep;
}

}  // namespace siacdg
