#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <string>

#include "siacdg/runner.hpp"

namespace {

int cmd_run(const std::string& cfg_path, const std::string& out_override, bool quiet) {
  siacdg::ExperimentConfig cfg = siacdg::ExperimentConfig::parse_file(cfg_path);
  if (!out_override.empty()) cfg.output_dir = out_override;
  if (cfg.output_dir.empty()) cfg.output_dir = "out";
  const siacdg::RunResult res = siacdg::run_experiment(cfg);
  if (res.status == siacdg::RunResult::Status::Crashed) {
    std::fprintf(stderr, "solve aborted: non-finite state; last stable time t = %.12g\n",
                 res.crash_time);
    return 2;
  }
  if (!quiet) {
    const auto& rows = res.timeseries;
    std::printf("completed t = %.12g in %zu steps (dt = %.6g)\n", res.final_time, rows.size(),
                res.dt);
    if (!rows.empty()) {
      std::printf("mass = %.12g, energy = %.12g\n", rows.back().mass, rows.back().energy);
    }
    std::printf("artifacts written to %s\n", cfg.output_dir.c_str());
  }
  return 0;
}

int cmd_convergence(const std::string& cfg_path, const std::string& out_override, bool quiet) {
  siacdg::ExperimentConfig cfg = siacdg::ExperimentConfig::parse_file(cfg_path);
  if (!out_override.empty()) cfg.output_dir = out_override;
  if (cfg.output_dir.empty()) cfg.output_dir = "out";
  cfg.validate();
  const auto rows = siacdg::convergence_study(cfg);
  siacdg::write_convergence_csv(rows, cfg.output_dir + "/convergence.csv");
  if (!quiet) {
    std::printf("wrote %zu rows to %s/convergence.csv\n", rows.size(), cfg.output_dir.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SIAC-filter entropy-corrected DGSEM experiments"};
  app.require_subcommand(1);

  std::string cfg_path, out_dir;
  bool quiet = false;
  long seed = 0;
  app.add_flag("--quiet", quiet, "suppress progress output");
  app.add_option("--seed", seed, "seed for randomized tooling (unused by the solver)");

  auto add_common = [&](CLI::App* cmd) {
    cmd->fallthrough();  // let --quiet/--seed appear after the subcommand
    cmd->add_option("config", cfg_path, "experiment config file")->required();
    cmd->add_option("--out", out_dir, "output directory override");
  };
  CLI::App* run = app.add_subcommand("run", "integrate one configuration");
  add_common(run);
  CLI::App* conv = app.add_subcommand("convergence", "built-in refinement sweep");
  add_common(conv);
  CLI::App* finspect = app.add_subcommand("filter-inspect", "export filter matrices and response");
  add_common(finspect);
  CLI::App* fvref = app.add_subcommand("fv-reference", "first-order finite-volume reference");
  add_common(fvref);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(cfg_path, out_dir, quiet);
    if (conv->parsed()) return cmd_convergence(cfg_path, out_dir, quiet);
    if (finspect->parsed()) {
      siacdg::ExperimentConfig cfg = siacdg::ExperimentConfig::parse_file(cfg_path);
      siacdg::filter_inspect(cfg, out_dir.empty() ? (cfg.output_dir.empty() ? "out" : cfg.output_dir)
                                                  : out_dir);
      return 0;
    }
    if (fvref->parsed()) {
      siacdg::ExperimentConfig cfg = siacdg::ExperimentConfig::parse_file(cfg_path);
      siacdg::fv_reference_run(cfg, out_dir.empty()
                                        ? (cfg.output_dir.empty() ? "out" : cfg.output_dir)
                                        : out_dir);
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
