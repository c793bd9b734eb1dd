#include "siacdg/basis.hpp"

#include <cmath>
#include <stdexcept>

namespace siacdg {

namespace {

// Legendre P_n and P'_n by the three-term recurrence. Valid for |x| <= 1;
// the derivative form below is used away from the endpoints only.
void legendre(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  if (n == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (int j = 2; j <= n; ++j) {
    const double pj = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
    p0 = p1;
    p1 = pj;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace

QuadratureRule lgl_rule(int p) {
  if (p < 1 || p > 20) throw std::invalid_argument("lgl_rule: degree must be in [1, 20]");
  const int n = p + 1;
  QuadratureRule rule;
  rule.kind = QuadratureRule::Kind::LGL;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  rule.nodes(0) = -1.0;
  rule.nodes(p) = 1.0;

  // Interior nodes are the roots of P'_p. Newton from Chebyshev-Gauss-Lobatto
  // guesses; P'' from the Legendre ODE.
  for (int k = 1; k < p; ++k) {
    double x = -std::cos(M_PI * k / p);
    for (int it = 0; it < 100; ++it) {
      double pp, dp;
      legendre(p, x, pp, dp);
      const double d2p = (2.0 * x * dp - p * (p + 1.0) * pp) / (1.0 - x * x);
      const double dx = dp / d2p;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes(k) = x;
  }
  // Enforce exact symmetry.
  for (int k = 0; 2 * k < p; ++k) {
    const double v = 0.5 * (rule.nodes(p - k) - rule.nodes(k));
    rule.nodes(k) = -v;
    rule.nodes(p - k) = v;
  }
  if (p % 2 == 0) rule.nodes(p / 2) = 0.0;

  for (int k = 0; k < n; ++k) {
    double pp, dp;
    legendre(p, rule.nodes(k), pp, dp);
    rule.weights(k) = 2.0 / (p * (p + 1.0) * pp * pp);
  }
  return rule;
}

QuadratureRule gl_rule(int n) {
  if (n < 1 || n > 40) throw std::invalid_argument("gl_rule: point count must be in [1, 40]");
  QuadratureRule rule;
  rule.kind = QuadratureRule::Kind::GL;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  if (n == 1) {
    rule.nodes(0) = 0.0;
    rule.weights(0) = 2.0;
    return rule;
  }
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0, dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      legendre(n, x, pp, dp);
      const double dx = pp / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    legendre(n, x, pp, dp);
    rule.nodes(n - 1 - i) = x;  // the cosine guesses descend
    rule.weights(n - 1 - i) = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  for (int i = 0; 2 * i < n; ++i) {
    const double v = 0.5 * (rule.nodes(n - 1 - i) - rule.nodes(i));
    rule.nodes(i) = -v;
    rule.nodes(n - 1 - i) = v;
    const double w = 0.5 * (rule.weights(i) + rule.weights(n - 1 - i));
    rule.weights(i) = w;
    rule.weights(n - 1 - i) = w;
  }
  if (n % 2 == 1) rule.nodes(n / 2) = 0.0;
  return rule;
}

Eigen::VectorXd barycentric_weights(const Eigen::VectorXd& nodes) {
  const int n = static_cast<int>(nodes.size());
  Eigen::VectorXd w = Eigen::VectorXd::Ones(n);
  for (int j = 0; j < n; ++j) {
    for (int m = 0; m < n; ++m) {
      if (m == j) continue;
      const double d = nodes(j) - nodes(m);
      if (d == 0.0) throw std::invalid_argument("barycentric_weights: duplicate nodes");
      w(j) /= d;
    }
  }
  w /= w.cwiseAbs().maxCoeff();
  return w;
}

Eigen::MatrixXd diff_matrix(const QuadratureRule& rule) {
  const int n = rule.size();
  const Eigen::VectorXd w = barycentric_weights(rule.nodes);
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      d(i, j) = (w(j) / w(i)) / (rule.nodes(i) - rule.nodes(j));
      diag -= d(i, j);
    }
    d(i, i) = diag;  // rows sum to zero exactly
  }
  return d;
}

NodalBasis::NodalBasis(int p) : degree(p), rule(lgl_rule(p)) {
  bary = barycentric_weights(rule.nodes);
  diff = diff_matrix(rule);
}

Eigen::VectorXd NodalBasis::lagrange_values(double xi) const {
  const int n = rule.size();
  Eigen::VectorXd vals = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    if (std::abs(xi - rule.nodes(j)) < 1e-14) {
      vals(j) = 1.0;
      return vals;
    }
  }
  double denom = 0.0;
  for (int j = 0; j < n; ++j) {
    vals(j) = bary(j) / (xi - rule.nodes(j));
    denom += vals(j);
  }
  vals /= denom;
  return vals;
}

double NodalBasis::interpolate(const Eigen::Ref<const Eigen::VectorXd>& nodal, double xi) const {
  return lagrange_values(xi).dot(nodal);
}

Eigen::VectorXd NodalBasis::boundary_diagonal() const {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(rule.size());
  b(0) = -1.0;
  b(rule.size() - 1) = 1.0;
  return b;
}

}  // namespace siacdg
