#ifndef SIACDG_CONFIG_HPP_
#define SIACDG_CONFIG_HPP_

#include <optional>
#include <string>

#include "siacdg/correction.hpp"
#include "siacdg/dg.hpp"

namespace siacdg {

enum class ProblemKind { Burgers1D, Burgers2D, Advect2D };
enum class InitKind { SineOffset, Table };

/// Experiment description parsed from the flat dotted-key config format
/// (see README for the grammar). Unknown keys are rejected.
struct ExperimentConfig {
  ProblemKind problem = ProblemKind::Burgers1D;
  double domain_min = 0.0;
  double domain_max = 2.0;
  int elements = 21;      // 1D count, or per-direction when elements_x/y unset
  int elements_x = 0;     // 0 = use `elements`
  int elements_y = 0;
  int degree = 5;
  FluxKind flux = FluxKind::LocalLaxFriedrichs;

  CorrectionModeKind correction = CorrectionModeKind::None;
  int kernel_moments = 1;       // r + 1
  int kernel_order = 1;         // ell
  double kernel_scaling = 1.0;  // H multiplier (of dx in 1D, of sqrt(2) dx in 2D)
  std::optional<double> line_angle;  // radians; defaults to pi/4 in 2D
  bool blend_clamp = true;

  DissipationParams dissipation;

  std::string stepper = "ssprk33";
  bool relaxation = true;
  double cfl = 0.1;
  double t_final = 0.3183098861837907;  // 1/pi

  InitKind init = InitKind::SineOffset;
  std::string init_table;  // CSV path when init == Table

  std::string output_dir;               // empty: no artifacts
  std::vector<double> output_times;     // extra solution snapshots
  int fv_cells = 2000;                  // fv-reference subcommand

  static ExperimentConfig parse_file(const std::string& path);
  static ExperimentConfig parse_string(const std::string& text);
  std::string serialize() const;

  /// Range and combination checks; throws std::invalid_argument.
  void validate() const;
};

}  // namespace siacdg

#endif  // SIACDG_CONFIG_HPP_
