#include <doctest.h>

#include <cmath>
#include <random>

#include "siacdg/correction.hpp"
#include "siacdg/timeint.hpp"

using namespace siacdg;

TEST_CASE("tableaus: order conditions") {
  for (const char* name : {"fe", "ssprk22", "ssprk33", "rk44"}) {
    const auto tab = make_tableau(name);
    CHECK(std::abs(tab.b.sum() - 1.0) < 1e-15);
    CHECK((tab.b.array() > 0.0).all());
    CHECK((tab.c - tab.A.rowwise().sum()).cwiseAbs().maxCoeff() < 1e-15);
    if (tab.stages() >= 2) {
      CHECK(std::abs(tab.b.dot(tab.c) - 0.5) < 1e-14);
    }
    if (std::string(name) == "ssprk33" || std::string(name) == "rk44") {
      CHECK(std::abs(tab.b.dot(tab.c.cwiseProduct(tab.c)) - 1.0 / 3.0) < 1e-14);
      CHECK(std::abs(tab.b.dot(tab.A * tab.c) - 1.0 / 6.0) < 1e-14);
    }
    if (std::string(name) == "rk44") {
      const Eigen::VectorXd c2 = tab.c.cwiseProduct(tab.c);
      CHECK(std::abs(tab.b.dot(c2.cwiseProduct(tab.c)) - 0.25) < 1e-14);
      CHECK(std::abs(tab.b.cwiseProduct(tab.c).dot(tab.A * tab.c) - 1.0 / 8.0) < 1e-14);
      CHECK(std::abs(tab.b.dot(tab.A * c2) - 1.0 / 12.0) < 1e-14);
      CHECK(std::abs(tab.b.dot(tab.A * (tab.A * tab.c)) - 1.0 / 24.0) < 1e-14);
    }
  }
  CHECK_THROWS_AS(make_tableau("rk99"), std::invalid_argument);
}

TEST_CASE("rk_step: identity rhs cases") {
  const auto fe = make_tableau("fe");
  Eigen::VectorXd u = Eigen::Vector3d(1.0, -2.0, 0.5);
  auto zero = [](const Eigen::VectorXd& v, double) { return Eigen::VectorXd::Zero(v.size()); };
  CHECK((rk_step(fe, u, 0.0, 0.1, zero) - u).cwiseAbs().maxCoeff() == 0.0);

  const double lambda = -0.37;
  auto lin = [&](const Eigen::VectorXd& v, double) -> Eigen::VectorXd { return lambda * v; };
  const Eigen::VectorXd u1 = rk_step(fe, u, 0.0, 0.1, lin);
  CHECK((u1 - (u + 0.1 * lambda * u)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("ssprk33 converges at third order on u' = lambda u") {
  const auto tab = make_tableau("ssprk33");
  const double lambda = -1.1;
  auto lin = [&](const Eigen::VectorXd& v, double) -> Eigen::VectorXd { return lambda * v; };
  auto solve = [&](double dt) {
    Eigen::VectorXd u = Eigen::VectorXd::Ones(1);
    double t = 0.0;
    while (t < 1.0 - 1e-12) {
      const double step = std::min(dt, 1.0 - t);
      u = rk_step(tab, u, t, step, lin);
      t += step;
    }
    return std::abs(u(0) - std::exp(lambda));
  };
  const double e1 = solve(0.02), e2 = solve(0.01);
  CHECK(e1 / e2 > 8.0 * 0.85);
  CHECK(e1 / e2 < 8.0 * 1.15);
}

TEST_CASE("relaxation factor: degenerate branches") {
  const auto tab = make_tableau("ssprk33");
  const Eigen::VectorXd m = Eigen::VectorXd::Ones(3);
  std::vector<Eigen::VectorXd> zero_stages(3, Eigen::VectorXd::Zero(3));
  CHECK(relaxation_factor(zero_stages, tab, m) == 1.0);

  // Forward Euler has A = 0, so the formula collapses to gamma = 0; this is
  // why relaxation is rejected for single-stage tableaus.
  const auto fe = make_tableau("fe");
  std::vector<Eigen::VectorXd> one_stage{Eigen::Vector3d(1.0, 2.0, 3.0)};
  CHECK(relaxation_factor(one_stage, fe, m) == 0.0);
  CHECK_THROWS_AS(
      rrk_step(fe, Eigen::Vector3d(1.0, 0.0, 0.0), 0.0, 0.1,
               [](const Eigen::VectorXd& v, double) -> Eigen::VectorXd { return v; }, m),
      std::invalid_argument);
}

TEST_CASE("rrk: zero tendency leaves state and time scale untouched") {
  const auto tab = make_tableau("ssprk33");
  const Eigen::VectorXd m = Eigen::VectorXd::Ones(3);
  const Eigen::VectorXd u = Eigen::Vector3d(0.3, -1.0, 2.0);
  auto zero = [](const Eigen::VectorXd& v, double) { return Eigen::VectorXd::Zero(v.size()); };
  const StepResult res = rrk_step(tab, u, 0.0, 0.2, zero, m);
  CHECK((res.u - u).cwiseAbs().maxCoeff() == 0.0);
  CHECK(res.gamma == 1.0);
  CHECK(res.t_new == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("rrk: skew system conserves the M-energy exactly") {
  std::mt19937 rng(97u);
  std::uniform_real_distribution<double> dist(0.2, 2.0);
  Eigen::VectorXd m(4);
  for (int i = 0; i < 4; ++i) m(i) = dist(rng);
  Eigen::MatrixXd a(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < i; ++j) {
      a(i, j) = dist(rng) - 1.0;
      a(j, i) = -a(i, j);
    }
    a(i, i) = 0.0;
  }
  const Eigen::MatrixXd s = m.cwiseInverse().asDiagonal() * a;  // S^T M + M S = 0
  auto rhs = [&](const Eigen::VectorXd& v, double) -> Eigen::VectorXd { return s * v; };

  const auto tab = make_tableau("ssprk33");
  Eigen::VectorXd u = Eigen::Vector4d(1.0, -0.5, 0.3, 0.8);
  double t = 0.0;
  const double e0 = u.dot(m.cwiseProduct(u));
  double sum_gamma_dt = 0.0;
  for (int n = 0; n < 50; ++n) {
    const StepResult res = rrk_step(tab, u, t, 0.05, rhs, m);
    const double e_new = res.u.dot(m.cwiseProduct(res.u));
    CHECK(std::abs(e_new - u.dot(m.cwiseProduct(u))) < 1e-13 * e0);
    sum_gamma_dt += res.gamma * 0.05;
    u = res.u;
    t = res.t_new;
  }
  CHECK(std::abs(u.dot(m.cwiseProduct(u)) - e0) < 1e-12 * e0);
  CHECK(std::abs(t - sum_gamma_dt) < 1e-13);  // time advances by sum gamma dt

  // Relaxation identity: E(gamma) - E0 = 2 dt gamma sum_j b_j <y_j, f_j>.
  std::vector<Eigen::VectorXd> stage_f(tab.stages());
  std::vector<Eigen::VectorXd> stage_y(tab.stages());
  const double dt = 0.05;
  for (int i = 0; i < tab.stages(); ++i) {
    stage_y[i] = u;
    for (int j = 0; j < i; ++j) stage_y[i] += dt * tab.A(i, j) * stage_f[j];
    stage_f[i] = rhs(stage_y[i], 0.0);
  }
  const double gamma = relaxation_factor(stage_f, tab, m);
  Eigen::VectorXd update = Eigen::VectorXd::Zero(4);
  for (int j = 0; j < tab.stages(); ++j) update += tab.b(j) * stage_f[j];
  const Eigen::VectorXd u_new = u + gamma * dt * update;
  double stage_rate = 0.0;
  for (int j = 0; j < tab.stages(); ++j) stage_rate += tab.b(j) * stage_y[j].dot(m.cwiseProduct(stage_f[j]));
  const double lhs = u_new.dot(m.cwiseProduct(u_new)) - u.dot(m.cwiseProduct(u));
  CHECK(std::abs(lhs - 2.0 * dt * gamma * stage_rate) < 1e-12 * e0);
}

TEST_CASE("rrk: corrected Burgers conserves energy over 1000 steps") {
  const auto layout = build_layout(Mesh1D{0.0, 2.0, 21}, NodalBasis(5));
  const auto filter = conservation_correction(
      assemble_filter_1d(KernelSpec{1, 1, layout.dx, {}}, layout), layout);
  CorrectionConfig corr;
  corr.kind = CorrectionModeKind::Global;
  corr.filter = &filter;

  auto rhs = [&](const Eigen::VectorXd& v, double t) -> Eigen::VectorXd {
    SolutionField f{v, &layout, t};
    const Eigen::VectorXd r = dg_residual_1d(f, FluxKind::LocalLaxFriedrichs);
    return r + compute_correction(f, r, FluxKind::LocalLaxFriedrichs, corr).c;
  };

  Eigen::VectorXd u(layout.n_global);
  for (int z = 0; z < layout.n_global; ++z) u(z) = std::sin(M_PI * layout.xcoord(z)) + 0.01;
  const auto tab = make_tableau("ssprk33");
  const double dt = 0.1 * layout.h_min / 1.01;
  const double e0 = 0.5 * u.dot(layout.weights.cwiseProduct(u));

  double t = 0.0;
  std::vector<double> gammas;
  for (int n = 0; n < 1000; ++n) {
    const StepResult res = rrk_step(tab, u, t, dt, rhs, layout.weights);
    CHECK(std::abs(res.energy_after - res.energy_before) < 1e-12 * e0);
    u = res.u;
    t = res.t_new;
    gammas.push_back(res.gamma);
  }
  const double ef = 0.5 * u.dot(layout.weights.cwiseProduct(u));
  CHECK(std::abs(ef - e0) / e0 < 1e-10);
  CHECK(std::abs(gammas.front() - 1.0) < 0.05);

  // gamma -> 1 as dt -> 0.
  Eigen::VectorXd u0(layout.n_global);
  for (int z = 0; z < layout.n_global; ++z) u0(z) = std::sin(M_PI * layout.xcoord(z)) + 0.01;
  double prev = 1.0;
  for (double scale : {1.0, 0.5, 0.25}) {
    const StepResult res = rrk_step(tab, u0, 0.0, scale * dt, rhs, layout.weights);
    const double dev = std::abs(res.gamma - 1.0);
    if (scale < 1.0) CHECK(dev < prev);
    prev = dev;
  }
}

TEST_CASE("rrk and rk error paths") {
  const Eigen::VectorXd m = Eigen::VectorXd::Ones(2);
  const auto tab = make_tableau("ssprk22");
  auto bad = [](const Eigen::VectorXd& v, double) -> Eigen::VectorXd {
    return Eigen::VectorXd::Constant(v.size(), std::nan(""));
  };
  CHECK_THROWS_AS(rk_step(tab, Eigen::Vector2d(1.0, 1.0), 0.0, 0.1, bad), std::runtime_error);

  // Stage derivatives that reverse and grow mid-step drive the relaxation
  // factor negative; the step must refuse it.
  auto flip = [](const Eigen::VectorXd& v, double t) -> Eigen::VectorXd {
    return (t < 0.05 ? 1.0 : -2.0) * Eigen::VectorXd::Ones(v.size());
  };
  CHECK_THROWS_AS(rrk_step(tab, Eigen::Vector2d(1.0, 1.0), 0.0, 0.1, flip, m),
                  std::runtime_error);
}
