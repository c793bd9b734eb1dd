#ifndef SIACDG_TIMEINT_HPP_
#define SIACDG_TIMEINT_HPP_

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

namespace siacdg {

/// Explicit Butcher tableau with c_i = sum_j A(i,j) and b_j > 0.
struct RKTableau {
  Eigen::MatrixXd A;  // strictly lower triangular
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  std::string name;

  int stages() const { return static_cast<int>(b.size()); }
};

/// Named tableaus: "fe", "ssprk22", "ssprk33", "rk44".
RKTableau make_tableau(const std::string& name);

using RhsFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)>;

/// One standard explicit RK step (gamma = 1). Throws on non-finite stage
/// derivatives.
Eigen::VectorXd rk_step(const RKTableau& tab, const Eigen::VectorXd& u, double t,
                        double dt, const RhsFn& rhs);

/// Relaxation factor gamma = 2 sum b_i a_ij <f_i,f_j> / sum b_i b_j <f_i,f_j>
/// in the M-weighted inner product; returns 1 when the denominator is
/// degenerate.
double relaxation_factor(const std::vector<Eigen::VectorXd>& stage_f, const RKTableau& tab,
                         const Eigen::VectorXd& weights);

struct StepResult {
  Eigen::VectorXd u;
  double t_new = 0.0;
  double gamma = 1.0;
  double energy_before = 0.0;  // (1/2) u^T M u
  double energy_after = 0.0;
};

/// Relaxation RK step: u_new = u + gamma dt sum b_j f_j, time advances by
/// gamma dt. For an M-conservative tendency the discrete energy is preserved
/// to roundoff; for a dissipative one it is non-increasing. Requires
/// s >= 2 and b_j > 0; throws if gamma <= 0.
StepResult rrk_step(const RKTableau& tab, const Eigen::VectorXd& u, double t, double dt,
                    const RhsFn& rhs, const Eigen::VectorXd& weights);

}  // namespace siacdg

#endif  // SIACDG_TIMEINT_HPP_
