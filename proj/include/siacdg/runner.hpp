#ifndef SIACDG_RUNNER_HPP_
#define SIACDG_RUNNER_HPP_

#include <memory>
#include <string>
#include <vector>

#include "siacdg/analysis.hpp"
#include "siacdg/config.hpp"
#include "siacdg/siac.hpp"

namespace siacdg {

struct TimeseriesRow {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double c_rel = 0.0;
  double blend_weight = 0.0;
  double gamma = 1.0;
  double phi_diss = 0.0;
};

struct RunResult {
  enum class Status { Completed, Crashed };
  Status status = Status::Completed;
  double final_time = 0.0;   // reached simulation time (sum of gamma dt)
  double crash_time = 0.0;   // last stable time when status == Crashed
  std::shared_ptr<GlobalLayout> layout;
  Eigen::VectorXd state;     // last finite state
  std::vector<TimeseriesRow> timeseries;  // one row per accepted step
  std::vector<std::pair<double, Eigen::VectorXd>> snapshots;  // requested times + final
  double dt = 0.0;
};

/// Builds the discretization from the config and integrates to t_final.
/// NaN/Inf or |u| > 1e6 aborts the run with the last stable time recorded.
RunResult run_experiment(const ExperimentConfig& config);

/// Initial profile for the configured problem (1D problems only expose the
/// scalar form; 2D samplers live in the runner).
InitialCondition initial_condition_1d(const ExperimentConfig& config);

/// Write timeseries.csv and solution_<t>.csv under `out_dir`.
void write_run_artifacts(const RunResult& result, const ExperimentConfig& config,
                         const std::string& out_dir);

struct ConvergenceRow {
  std::string mode;
  int p = 0;
  int n = 0;
  double l2 = 0.0;
  double linf = 0.0;
  double order_l2 = 0.0;    // nan in the first row of a sweep
  double order_linf = 0.0;
};

/// Built-in refinement sweep. burgers1d: p in 1..4, N in {20,...,320},
/// modes {uncorrected, local, k11, k32}. advect2d: p in {2,3},
/// N in {4,8,16}, modes {uncorrected, lsiac}.
std::vector<ConvergenceRow> convergence_study(const ExperimentConfig& base);

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, const std::string& path);

/// Assemble the configured filter and export filter.csv / filter_corr.csv /
/// fourier.csv into out_dir.
void filter_inspect(const ExperimentConfig& config, const std::string& out_dir);

/// Finite-volume reference run; writes fv_solution.csv and fv_timeseries.csv.
void fv_reference_run(const ExperimentConfig& config, const std::string& out_dir);

/// Shared helper: the filter (conservation-corrected) the config asks for,
/// or nullptr for modes that need none.
std::unique_ptr<FilterOperator> build_filter(const ExperimentConfig& config,
                                             const GlobalLayout& layout);

}  // namespace siacdg

#endif  // SIACDG_RUNNER_HPP_
