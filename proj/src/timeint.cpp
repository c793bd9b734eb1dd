#include "siacdg/timeint.hpp"

#include <cmath>
#include <stdexcept>

namespace siacdg {

RKTableau make_tableau(const std::string& name) {
  RKTableau tab;
  tab.name = name;
  if (name == "fe") {
    tab.A = Eigen::MatrixXd::Zero(1, 1);
    tab.b = Eigen::VectorXd::Ones(1);
  } else if (name == "ssprk22") {
    tab.A = Eigen::MatrixXd::Zero(2, 2);
    tab.A(1, 0) = 1.0;
    tab.b = Eigen::VectorXd::Constant(2, 0.5);
  } else if (name == "ssprk33") {
    tab.A = Eigen::MatrixXd::Zero(3, 3);
    tab.A(1, 0) = 1.0;
    tab.A(2, 0) = 0.25;
    tab.A(2, 1) = 0.25;
    tab.b.resize(3);
    tab.b << 1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0;
  } else if (name == "rk44") {
    tab.A = Eigen::MatrixXd::Zero(4, 4);
    tab.A(1, 0) = 0.5;
    tab.A(2, 1) = 0.5;
    tab.A(3, 2) = 1.0;
    tab.b.resize(4);
    tab.b << 1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0;
  } else {
    throw std::invalid_argument("make_tableau: unknown stepper '" + name + "'");
  }
  tab.c = tab.A.rowwise().sum();
  return tab;
}

namespace {

// Runs the stage recursion, filling f_j = rhs(y_j); returns sum_j b_j f_j.
Eigen::VectorXd run_stages(const RKTableau& tab, const Eigen::VectorXd& u, double t, double dt,
                           const RhsFn& rhs, std::vector<Eigen::VectorXd>& stage_f) {
  const int s = tab.stages();
  stage_f.resize(s);
  Eigen::VectorXd y;
  for (int i = 0; i < s; ++i) {
    y = u;
    for (int j = 0; j < i; ++j) {
      if (tab.A(i, j) != 0.0) y += dt * tab.A(i, j) * stage_f[j];
    }
    stage_f[i] = rhs(y, t + tab.c(i) * dt);
    if (!stage_f[i].allFinite()) {
      throw std::runtime_error("rk: non-finite stage derivative");
    }
  }
  Eigen::VectorXd update = tab.b(0) * stage_f[0];
  for (int j = 1; j < s; ++j) update += tab.b(j) * stage_f[j];
  return update;
}

}  // namespace

Eigen::VectorXd rk_step(const RKTableau& tab, const Eigen::VectorXd& u, double t, double dt,
                        const RhsFn& rhs) {
  if (dt <= 0.0) throw std::invalid_argument("rk_step: dt must be positive");
  std::vector<Eigen::VectorXd> stage_f;
  return u + dt * run_stages(tab, u, t, dt, rhs, stage_f);
}

double relaxation_factor(const std::vector<Eigen::VectorXd>& stage_f, const RKTableau& tab,
                         const Eigen::VectorXd& weights) {
  const int s = static_cast<int>(stage_f.size());
  Eigen::MatrixXd inner(s, s);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j <= i; ++j) {
      inner(i, j) = stage_f[i].dot(weights.cwiseProduct(stage_f[j]));
      inner(j, i) = inner(i, j);
    }
  }
  double num = 0.0, den = 0.0, scale = 0.0;
  for (int i = 0; i < s; ++i) {
    scale = std::max(scale, inner(i, i));
    for (int j = 0; j < s; ++j) {
      num += tab.b(i) * tab.A(i, j) * inner(i, j);
      den += tab.b(i) * tab.b(j) * inner(i, j);
    }
  }
  if (den <= 1e-14 * scale) return 1.0;
  return 2.0 * num / den;
}

StepResult rrk_step(const RKTableau& tab, const Eigen::VectorXd& u, double t, double dt,
                    const RhsFn& rhs, const Eigen::VectorXd& weights) {
  if (dt <= 0.0) throw std::invalid_argument("rrk_step: dt must be positive");
  if (tab.stages() < 2) {
    throw std::invalid_argument("rrk_step: relaxation needs at least two stages");
  }
  if ((tab.b.array() <= 0.0).any()) {
    throw std::invalid_argument("rrk_step: relaxation requires b_j > 0");
  }
  std::vector<Eigen::VectorXd> stage_f;
  const Eigen::VectorXd update = run_stages(tab, u, t, dt, rhs, stage_f);
  const double gamma = relaxation_factor(stage_f, tab, weights);
  if (gamma <= 0.0) {
    throw std::runtime_error("rrk_step: nonpositive relaxation factor");
  }
  StepResult res;
  res.u = u + gamma * dt * update;
  res.t_new = t + gamma * dt;
  res.gamma = gamma;
  res.energy_before = 0.5 * u.dot(weights.cwiseProduct(u));
  res.energy_after = 0.5 * res.u.dot(weights.cwiseProduct(res.u));
  return res;
}

}  // namespace siacdg
