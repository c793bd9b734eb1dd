#include <doctest.h>

#include <cmath>
#include <random>

#include "siacdg/analysis.hpp"
#include "siacdg/dg.hpp"

using namespace siacdg;

namespace {

SolutionField make_field(const GlobalLayout& layout, const std::function<double(double)>& f) {
  SolutionField u;
  u.layout = &layout;
  u.values.resize(layout.n_global);
  for (int z = 0; z < layout.n_global; ++z) u.values(z) = f(layout.xcoord(z));
  return u;
}

SolutionField make_field_2d(const GlobalLayout& layout,
                            const std::function<double(double, double)>& f) {
  SolutionField u;
  u.layout = &layout;
  u.values.resize(layout.n_global);
  for (int z = 0; z < layout.n_global; ++z) u.values(z) = f(layout.xcoord(z), layout.ycoord(z));
  return u;
}

}  // namespace

TEST_CASE("numerical flux: consistency and closed-form values") {
  for (double u : {-1.3, 0.0, 0.7, 2.0}) {
    CHECK(numerical_flux(u, u, FluxKind::Central) == doctest::Approx(0.5 * u * u).epsilon(1e-15));
    CHECK(numerical_flux(u, u, FluxKind::LocalLaxFriedrichs) ==
          doctest::Approx(0.5 * u * u).epsilon(1e-15));
  }
  CHECK(std::abs(numerical_flux(1.0, -1.0, FluxKind::LocalLaxFriedrichs) - 1.5) < 1e-15);
  CHECK(std::abs(numerical_flux(2.0, 0.0, FluxKind::Central) - 1.0) < 1e-15);
}

TEST_CASE("numerical entropy flux: potential and closed-form values") {
  CHECK(std::abs(burgers_entropy_potential(2.0) - 4.0 / 3.0) < 1e-15);
  CHECK(std::abs(numerical_entropy_flux(1.0, 1.0, FluxKind::Central) - 1.0 / 3.0) < 1e-15);
  CHECK(std::abs(numerical_entropy_flux(1.0, 1.0, FluxKind::LocalLaxFriedrichs) - 1.0 / 3.0) <
        1e-15);
  CHECK(std::abs(numerical_entropy_flux(1.0, -1.0, FluxKind::Central)) < 1e-15);
  // With alpha = max(|uL|,|uR|) = 1: f_num = 3/4, {{w}} = 1/2, {{psi}} = 1/12.
  CHECK(std::abs(numerical_entropy_flux(1.0, 0.0, FluxKind::LocalLaxFriedrichs) - 7.0 / 24.0) <
        1e-15);
}

TEST_CASE("dg residual 1d: free stream and conservation") {
  const auto layout = build_layout(Mesh1D{0.0, 2.0, 21}, NodalBasis(5));
  const auto uc = make_field(layout, [](double) { return 0.7; });
  for (auto kind : {FluxKind::Central, FluxKind::LocalLaxFriedrichs}) {
    CHECK(dg_residual_1d(uc, kind).cwiseAbs().maxCoeff() < 1e-13);
  }
  const auto us = make_field(layout, [](double x) { return std::sin(M_PI * x) + 0.01; });
  for (auto kind : {FluxKind::Central, FluxKind::LocalLaxFriedrichs}) {
    const Eigen::VectorXd r = dg_residual_1d(us, kind);
    CHECK(std::abs(layout.weights.dot(r)) < 1e-12);
  }
}

TEST_CASE("dg residual 1d: approximates -u u_x at order >= p") {
  const int p = 2;
  std::vector<double> errs;
  for (int n : {10, 20, 40, 80}) {
    const auto layout = build_layout(Mesh1D{0.0, 2.0, n}, NodalBasis(p));
    const auto u = make_field(layout, [](double x) { return std::sin(M_PI * x); });
    const Eigen::VectorXd r = dg_residual_1d(u, FluxKind::LocalLaxFriedrichs);
    double err = 0.0;
    for (int z = 0; z < layout.n_global; ++z) {
      const double x = layout.xcoord(z);
      err = std::max(err, std::abs(r(z) + std::sin(M_PI * x) * M_PI * std::cos(M_PI * x)));
    }
    errs.push_back(err);
  }
  for (std::size_t k = 0; k + 1 < errs.size(); ++k) {
    CHECK(std::log2(errs[k] / errs[k + 1]) >= p - 0.1);
  }
}

TEST_CASE("entropy flux residual: zero on constants, converges to dF/dx") {
  const auto layout = build_layout(Mesh1D{0.0, 2.0, 12}, NodalBasis(3));
  const auto uc = make_field(layout, [](double) { return -0.4; });
  CHECK(entropy_flux_residual(uc, FluxKind::LocalLaxFriedrichs).cwiseAbs().maxCoeff() < 1e-13);

  const int p = 2;
  std::vector<double> errs;
  for (int n : {10, 20, 40, 80}) {
    const auto lay = build_layout(Mesh1D{0.0, 2.0, n}, NodalBasis(p));
    const auto u = make_field(lay, [](double x) { return std::sin(M_PI * x) + 0.01; });
    const Eigen::VectorXd rf = entropy_flux_residual(u, FluxKind::LocalLaxFriedrichs);
    double err = 0.0;
    for (int z = 0; z < lay.n_global; ++z) {
      const double x = lay.xcoord(z);
      const double uu = std::sin(M_PI * x) + 0.01;
      err = std::max(err, std::abs(rf(z) - uu * uu * M_PI * std::cos(M_PI * x)));
    }
    errs.push_back(err);
  }
  for (std::size_t k = 0; k + 1 < errs.size(); ++k) {
    CHECK(std::log2(errs[k] / errs[k + 1]) >= p - 0.1);
  }
}

TEST_CASE("dg residual 2d: free stream, conservation") {
  const auto layout = build_layout(Mesh2D{0.0, 1.0, 8, 8}, NodalBasis(5));
  const auto uc = make_field_2d(layout, [](double, double) { return 1.2; });
  CHECK(dg_residual_2d(uc, FluxKind::LocalLaxFriedrichs).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(advection_residual_2d(uc, FluxKind::LocalLaxFriedrichs).cwiseAbs().maxCoeff() < 1e-12);

  const auto us = make_field_2d(
      layout, [](double x, double y) { return std::sin(2.0 * M_PI * (x + y)) + 0.01; });
  const Eigen::VectorXd r = dg_residual_2d(us, FluxKind::LocalLaxFriedrichs);
  CHECK(std::abs(layout.weights.dot(r)) < 1e-11);
  const Eigen::VectorXd ra = advection_residual_2d(us, FluxKind::LocalLaxFriedrichs);
  CHECK(std::abs(layout.weights.dot(ra)) < 1e-11);
}

TEST_CASE("dg residual 2d: diagonal data reduces to the 1d operator") {
  // u(x,y) = g(x+y): along row j the x-sweep sees the 1d field g(. + y_j),
  // so on diagonal nodes the 2d tendency is twice the 1d one.
  const int p = 2, n = 4;
  const auto l2 = build_layout(Mesh2D{0.0, 1.0, n, n}, NodalBasis(p));
  const auto l1 = build_layout(Mesh1D{0.0, 1.0, n}, NodalBasis(p));
  auto g = [](double s) { return std::sin(2.0 * M_PI * s) + 0.3; };
  const auto u2 = make_field_2d(l2, [&](double x, double y) { return g(x + y); });
  const Eigen::VectorXd r2 = dg_residual_2d(u2, FluxKind::LocalLaxFriedrichs);

  for (int e = 0; e < n; ++e) {
    for (int i = 0; i <= p; ++i) {
      const int z2 = l2.node_index2(e, e, i, i);
      const double ystar = l2.ycoord(z2);
      SolutionField u1;
      u1.layout = &l1;
      u1.values.resize(l1.n_global);
      for (int z = 0; z < l1.n_global; ++z) u1.values(z) = g(l1.xcoord(z) + ystar);
      const Eigen::VectorXd r1 = dg_residual_1d(u1, FluxKind::LocalLaxFriedrichs);
      CHECK(std::abs(r2(z2) - 2.0 * r1(l1.node_index(e, i))) < 1e-10);
    }
  }
}

TEST_CASE("dg residual: conservation holds for arbitrary periodic states") {
  std::mt19937 rng(17u);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const auto l1 = build_layout(Mesh1D{0.0, 2.0, 9}, NodalBasis(4));
  for (int trial = 0; trial < 20; ++trial) {
    SolutionField u;
    u.layout = &l1;
    u.values.resize(l1.n_global);
    for (int z = 0; z < l1.n_global; ++z) u.values(z) = dist(rng);
    for (auto kind : {FluxKind::Central, FluxKind::LocalLaxFriedrichs}) {
      CHECK(std::abs(l1.weights.dot(dg_residual_1d(u, kind))) < 1e-12);
    }
  }
  const auto l2 = build_layout(Mesh2D{0.0, 1.0, 4, 4}, NodalBasis(3));
  for (int trial = 0; trial < 10; ++trial) {
    SolutionField u;
    u.layout = &l2;
    u.values.resize(l2.n_global);
    for (int z = 0; z < l2.n_global; ++z) u.values(z) = dist(rng);
    CHECK(std::abs(l2.weights.dot(dg_residual_2d(u, FluxKind::LocalLaxFriedrichs))) < 1e-12);
    CHECK(std::abs(l2.weights.dot(advection_residual_2d(u, FluxKind::LocalLaxFriedrichs))) <
          1e-12);
  }
}

TEST_CASE("dg residual rejects non-finite states") {
  const auto layout = build_layout(Mesh1D{0.0, 2.0, 4}, NodalBasis(2));
  SolutionField u = make_field(layout, [](double) { return 1.0; });
  u.values(3) = std::nan("");
  CHECK_THROWS_AS(dg_residual_1d(u, FluxKind::Central), std::invalid_argument);
}

TEST_CASE("fv reference: constants, shock speed, mass") {
  const auto cres = fv_reference(50, [](double) { return 0.8; }, 0.0, 2.0, 0.3);
  CHECK((cres.cell_averages.array() - 0.8).abs().maxCoeff() < 1e-14);

  // Riemann data: shock from x0 = 0.5 with speed 1/2.
  const int n = 400;
  const auto res = fv_reference(
      n, [](double x) { return x < 0.5 ? 1.0 : 0.0; }, 0.0, 2.0, 0.5);
  const double dx = 2.0 / n;
  double front = -1.0;
  for (int i = 0; i + 1 < n; ++i) {
    if (res.cell_averages(i) >= 0.5 && res.cell_averages(i + 1) < 0.5) {
      front = res.cell_centers(i) + 0.5 * dx;
      break;
    }
  }
  CHECK(std::abs(front - 0.75) <= dx + 1e-12);
  CHECK(std::abs(res.mass.back() - res.mass.front()) < 1e-12);
  CHECK(res.energy.back() <= res.energy.front() + 1e-12);
}

TEST_CASE("fv reference input validation") {
  CHECK_THROWS_AS(fv_reference(5, [](double) { return 0.0; }, 0.0, 1.0, 0.1),
                  std::invalid_argument);
}
