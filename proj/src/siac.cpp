#include "siacdg/siac.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

namespace siacdg {

double bspline(int ell, double t) {
  if (ell < 1) throw std::invalid_argument("bspline: order must be >= 1");
  if (ell == 1) return (t >= -0.5 && t < 0.5) ? 1.0 : 0.0;
  if (std::abs(t) >= 0.5 * ell) return 0.0;
  const double h = 0.5 * ell;
  return ((h + t) * bspline(ell - 1, t + 0.5) + (h - t) * bspline(ell - 1, t - 0.5)) /
         (ell - 1);
}

Eigen::VectorXd kernel_coefficients(int r, int ell) {
  if (r < 0) throw std::invalid_argument("kernel_coefficients: r must be >= 0");
  if (ell < 1) throw std::invalid_argument("kernel_coefficients: spline order must be >= 1");
  const int n = r + 1;
  const QuadratureRule gl = gl_rule((ell + r) / 2 + 1);

  // A(k, g) = int B^ell(x - s_g) x^k dx with s_g = g - r/2, integrated
  // exactly piecewise between the spline knots.
  Eigen::MatrixXd a(n, n);
  for (int g = 0; g < n; ++g) {
    const double s = g - 0.5 * r;
    for (int k = 0; k < n; ++k) {
      double acc = 0.0;
      for (int m = 0; m < ell; ++m) {
        const double lo = s - 0.5 * ell + m;
        for (int q = 0; q < gl.size(); ++q) {
          const double x = lo + 0.5 * (1.0 + gl.nodes(q));
          acc += 0.5 * gl.weights(q) * bspline(ell, x - s) * std::pow(x, k);
        }
      }
      a(k, g) = acc;
    }
  }

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(0) = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) {
    throw std::runtime_error("kernel_coefficients: singular moment system");
  }
  Eigen::VectorXd c = lu.solve(rhs);
  // The exact solution is symmetric; fold out solver noise.
  for (int g = 0; 2 * g < n; ++g) {
    const double v = 0.5 * (c(g) + c(r - g));
    c(g) = v;
    c(r - g) = v;
  }
  return c;
}

namespace {

double sinc(double x) {
  if (std::abs(x) < 1e-6) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

double kernel_value(const Eigen::VectorXd& coeffs, int ell, double t) {
  const int r = static_cast<int>(coeffs.size()) - 1;
  double acc = 0.0;
  for (int g = 0; g <= r; ++g) acc += coeffs(g) * bspline(ell, t + 0.5 * r - g);
  return acc;
}

}  // namespace

double kernel_fourier(const KernelSpec& spec, double k) {
  const Eigen::VectorXd c = kernel_coefficients(spec.r(), spec.spline_order);
  const double kappa = k * spec.scaling;
  double bracket = 0.0;
  for (int g = 0; g <= spec.r(); ++g) {
    bracket += c(g) * std::cos((0.5 * spec.r() - g) * kappa);
  }
  return std::pow(sinc(0.5 * kappa), spec.spline_order) * bracket;
}

Eigen::VectorXd FilterOperator::apply(const Eigen::Ref<const Eigen::VectorXd>& u) const {
  Eigen::VectorXd out = matrix * u;
  if (mass_fix.size() > 0) out.array() -= mass_fix.dot(u);
  return out;
}

double FilterOperator::entry(int i, int j) const {
  double v = matrix.coeff(i, j);
  if (mass_fix.size() > 0) v -= mass_fix(j);
  return v;
}

namespace {

// Sorted unique breakpoints, merged with a relative tolerance.
std::vector<double> merge_breakpoints(std::vector<double> pts, double tol) {
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  for (double p : pts) {
    if (out.empty() || p - out.back() > tol) out.push_back(p);
  }
  return out;
}

int wrap_index(int i, int n) { return ((i % n) + n) % n; }

}  // namespace

FilterOperator assemble_filter_1d(const KernelSpec& spec, const GlobalLayout& layout) {
  if (layout.dim != 1) throw std::invalid_argument("assemble_filter_1d: layout is not 1D");
  if (spec.scaling <= 0.0) throw std::invalid_argument("assemble_filter_1d: scaling must be > 0");
  const double width = spec.support_width();
  if (width > layout.measure * (1.0 + 1e-12)) {
    throw std::invalid_argument("assemble_filter_1d: kernel support exceeds the domain");
  }

  const int np = layout.p + 1;
  const int r = spec.r();
  const int ell = spec.spline_order;
  const double h = spec.scaling;
  const double dx = layout.dx;
  const Eigen::VectorXd coeffs = kernel_coefficients(r, ell);
  const QuadratureRule gl = gl_rule((ell + layout.p + 1) / 2 + 1);
  const double tol = 1e-12 * std::max(dx, h);

  // The mesh is uniform and the kernel translation invariant, so one stencil
  // per local node suffices; the global matrix is its periodic repetition.
  // Entries are keyed by (element offset -> basis coefficients).
  std::vector<std::map<int, Eigen::VectorXd>> stencils(np);
  for (int k = 0; k < np; ++k) {
    const double x = dx * 0.5 * (1.0 + layout.basis.rule.nodes(k));  // within [0, dx]
    std::vector<double> pts;
    for (int j = 0; j <= r + ell; ++j) {
      pts.push_back(x - h * (-0.5 * (r + ell) + j));
    }
    const int m_lo = static_cast<int>(std::ceil((x - 0.5 * width) / dx - 1e-12));
    const int m_hi = static_cast<int>(std::floor((x + 0.5 * width) / dx + 1e-12));
    for (int m = m_lo; m <= m_hi; ++m) pts.push_back(m * dx);
    const std::vector<double> bp = merge_breakpoints(std::move(pts), tol);

    auto& entries = stencils[k];
    for (std::size_t s = 0; s + 1 < bp.size(); ++s) {
      const double y0 = bp[s], y1 = bp[s + 1];
      if (y1 - y0 <= tol) continue;
      const int off = static_cast<int>(std::floor(0.5 * (y0 + y1) / dx));
      auto [it, inserted] = entries.try_emplace(off, Eigen::VectorXd::Zero(np));
      Eigen::VectorXd& acc = it->second;
      for (int q = 0; q < gl.size(); ++q) {
        const double y = 0.5 * (y0 + y1) + 0.5 * (y1 - y0) * gl.nodes(q);
        const double kv = kernel_value(coeffs, ell, (x - y) / h) / h;
        if (kv == 0.0) continue;
        const double xi = 2.0 * (y / dx - off) - 1.0;
        acc += (0.5 * (y1 - y0) * gl.weights(q) * kv) * layout.basis.lagrange_values(xi);
      }
    }
  }

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(layout.n_global) * (r + ell + 2) * np);
  for (int e = 0; e < layout.nex; ++e) {
    for (int k = 0; k < np; ++k) {
      const int row = layout.node_index(e, k);
      for (const auto& [off, vals] : stencils[k]) {
        const int ce = wrap_index(e + off, layout.nex);
        for (int i = 0; i < np; ++i) {
          trips.emplace_back(row, layout.node_index(ce, i), vals(i));
        }
      }
    }
  }

  FilterOperator filter;
  filter.spec = spec;
  filter.matrix.resize(layout.n_global, layout.n_global);
  filter.matrix.setFromTriplets(trips.begin(), trips.end());
  const Eigen::VectorXd col_mass = filter.matrix.transpose() * layout.weights;
  filter.conservative = ((col_mass - layout.weights).cwiseAbs().maxCoeff() <=
                         1e-12 * layout.weights.maxCoeff());
  return filter;
}

FilterOperator assemble_lsiac_2d(const KernelSpec& spec, const GlobalLayout& layout) {
  if (layout.dim != 2) throw std::invalid_argument("assemble_lsiac_2d: layout is not 2D");
  if (!spec.line_angle.has_value()) {
    throw std::invalid_argument("assemble_lsiac_2d: line_angle is required");
  }
  if (spec.scaling <= 0.0) throw std::invalid_argument("assemble_lsiac_2d: scaling must be > 0");
  const double theta = *spec.line_angle;
  const double cx = std::cos(theta);
  const double cy = std::sin(theta);
  const double width = spec.support_width();
  if (width * std::abs(cx) > (layout.bx - layout.ax) * (1.0 + 1e-12) ||
      width * std::abs(cy) > (layout.by - layout.ay) * (1.0 + 1e-12)) {
    throw std::invalid_argument("assemble_lsiac_2d: kernel support exceeds the domain");
  }

  const int np = layout.p + 1;
  const int r = spec.r();
  const int ell = spec.spline_order;
  const double h = spec.scaling;
  const double dx = layout.dx;
  const double dy = layout.dy;
  const Eigen::VectorXd coeffs = kernel_coefficients(r, ell);
  const QuadratureRule gl = gl_rule((ell + 2 * layout.p + 1) / 2 + 1);
  const double tol = 1e-12 * std::max({dx, dy, h});

  // Grid crossings of the support line x0 + t * dir in one coordinate.
  auto add_crossings = [&](double x0, double c, double cell, std::vector<double>& pts) {
    if (std::abs(c) < 1e-13) return;
    const double t0 = -0.5 * width, t1 = 0.5 * width;
    const double lo = std::min(x0 + c * t0, x0 + c * t1);
    const double hi = std::max(x0 + c * t0, x0 + c * t1);
    const int m_lo = static_cast<int>(std::ceil(lo / cell - 1e-12));
    const int m_hi = static_cast<int>(std::floor(hi / cell + 1e-12));
    for (int m = m_lo; m <= m_hi; ++m) pts.push_back((m * cell - x0) / c);
  };

  using Key = std::pair<int, int>;
  std::vector<std::map<Key, Eigen::MatrixXd>> stencils(layout.nodes_per_elem);
  for (int j = 0; j < np; ++j) {
    for (int i = 0; i < np; ++i) {
      const double x0 = dx * 0.5 * (1.0 + layout.basis.rule.nodes(i));
      const double y0 = dy * 0.5 * (1.0 + layout.basis.rule.nodes(j));
      std::vector<double> pts;
      for (int m = 0; m <= r + ell; ++m) pts.push_back(h * (-0.5 * (r + ell) + m));
      add_crossings(x0, cx, dx, pts);
      add_crossings(y0, cy, dy, pts);
      const std::vector<double> bp = merge_breakpoints(std::move(pts), tol);

      auto& entries = stencils[j * np + i];
      for (std::size_t s = 0; s + 1 < bp.size(); ++s) {
        const double t0 = bp[s], t1 = bp[s + 1];
        if (t1 - t0 <= tol) continue;
        const double tm = 0.5 * (t0 + t1);
        const int ox = static_cast<int>(std::floor((x0 + cx * tm) / dx));
        const int oy = static_cast<int>(std::floor((y0 + cy * tm) / dy));
        auto [it, inserted] = entries.try_emplace(Key{ox, oy}, Eigen::MatrixXd::Zero(np, np));
        Eigen::MatrixXd& acc = it->second;
        for (int q = 0; q < gl.size(); ++q) {
          const double t = tm + 0.5 * (t1 - t0) * gl.nodes(q);
          const double kv = kernel_value(coeffs, ell, t / h) / h;
          if (kv == 0.0) continue;
          const double xi = 2.0 * ((x0 + cx * t) / dx - ox) - 1.0;
          const double eta = 2.0 * ((y0 + cy * t) / dy - oy) - 1.0;
          const Eigen::VectorXd lx = layout.basis.lagrange_values(xi);
          const Eigen::VectorXd ly = layout.basis.lagrange_values(eta);
          acc += (0.5 * (t1 - t0) * gl.weights(q) * kv) * (lx * ly.transpose());
        }
      }
    }
  }

  std::vector<Eigen::Triplet<double>> trips;
  for (int ey = 0; ey < layout.ney; ++ey) {
    for (int ex = 0; ex < layout.nex; ++ex) {
      for (int j = 0; j < np; ++j) {
        for (int i = 0; i < np; ++i) {
          const int row = layout.node_index2(ex, ey, i, j);
          for (const auto& [key, vals] : stencils[j * np + i]) {
            const int cex = wrap_index(ex + key.first, layout.nex);
            const int cey = wrap_index(ey + key.second, layout.ney);
            for (int jj = 0; jj < np; ++jj) {
              for (int ii = 0; ii < np; ++ii) {
                trips.emplace_back(row, layout.node_index2(cex, cey, ii, jj), vals(ii, jj));
              }
            }
          }
        }
      }
    }
  }

  FilterOperator filter;
  filter.spec = spec;
  filter.matrix.resize(layout.n_global, layout.n_global);
  filter.matrix.setFromTriplets(trips.begin(), trips.end());
  const Eigen::VectorXd col_mass = filter.matrix.transpose() * layout.weights;
  filter.conservative = ((col_mass - layout.weights).cwiseAbs().maxCoeff() <=
                         1e-12 * layout.weights.maxCoeff());
  return filter;
}

FilterOperator conservation_correction(const FilterOperator& filter, const GlobalLayout& layout) {
  if (filter.rows() != layout.n_global) {
    throw std::invalid_argument("conservation_correction: size mismatch");
  }
  const Eigen::VectorXd& m = layout.weights;
  const double total = m.sum();
  Eigen::VectorXd col_mass = filter.matrix.transpose() * m;  // (1^T M K)^T
  if (filter.mass_fix.size() > 0) col_mass -= total * filter.mass_fix;

  FilterOperator out = filter;
  const Eigen::VectorXd add = (col_mass - m) / total;
  if (filter.mass_fix.size() > 0) {
    out.mass_fix = filter.mass_fix + add;
  } else {
    out.mass_fix = add;
  }
  out.conservative = true;
  return out;
}

FilterOperator local_average_filter(const GlobalLayout& layout) {
  const int npe = layout.nodes_per_elem;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(layout.n_global) * npe);
  for (int e = 0; e < layout.n_elements(); ++e) {
    const int z0 = layout.node_index(e, 0);
    double vol = 0.0;
    for (int k = 0; k < npe; ++k) vol += layout.weights(z0 + k);
    for (int k = 0; k < npe; ++k) {
      for (int kk = 0; kk < npe; ++kk) {
        trips.emplace_back(z0 + k, z0 + kk, layout.weights(z0 + kk) / vol);
      }
    }
  }
  FilterOperator filter;
  filter.matrix.resize(layout.n_global, layout.n_global);
  filter.matrix.setFromTriplets(trips.begin(), trips.end());
  filter.conservative = true;
  return filter;
}

}  // namespace siacdg
