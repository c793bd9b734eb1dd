#include "siacdg/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "siacdg/correction.hpp"
#include "siacdg/timeint.hpp"

namespace siacdg {

namespace {

constexpr double kBlowupLimit = 1e6;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct TableData {
  std::vector<double> x, u;
  double period = 0.0;
  double xmin = 0.0;
};

TableData load_table(const std::string& path, double a, double b) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("init.table: cannot open '" + path + "'");
  TableData t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || std::isalpha(static_cast<unsigned char>(line[0]))) {
      continue;  // header or comment
    }
    double x, u;
    if (std::sscanf(line.c_str(), "%lf,%lf", &x, &u) == 2) {
      t.x.push_back(x);
      t.u.push_back(u);
    }
  }
  if (t.x.size() < 2) throw std::invalid_argument("init.table: need at least two samples");
  std::vector<std::size_t> idx(t.x.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a_, std::size_t b_) {
    return t.x[a_] < t.x[b_];
  });
  TableData sorted;
  for (const std::size_t i : idx) {
    sorted.x.push_back(t.x[i]);
    sorted.u.push_back(t.u[i]);
  }
  sorted.period = b - a;
  sorted.xmin = a;
  return sorted;
}

double table_eval(const TableData& t, double x) {
  double s = std::fmod(x - t.xmin, t.period);
  if (s < 0.0) s += t.period;
  s += t.xmin;
  auto it = std::upper_bound(t.x.begin(), t.x.end(), s);
  std::size_t hi = it == t.x.end() ? t.x.size() - 1 : static_cast<std::size_t>(it - t.x.begin());
  if (hi == 0) hi = 1;
  const std::size_t lo = hi - 1;
  const double f = (s - t.x[lo]) / (t.x[hi] - t.x[lo]);
  return (1.0 - f) * t.u[lo] + f * t.u[hi];
}

std::shared_ptr<GlobalLayout> make_layout(const ExperimentConfig& cfg) {
  const NodalBasis basis(cfg.degree);
  if (cfg.problem == ProblemKind::Burgers1D) {
    Mesh1D mesh{cfg.domain_min, cfg.domain_max, cfg.elements};
    return std::make_shared<GlobalLayout>(build_layout(mesh, basis));
  }
  const int nx = cfg.elements_x > 0 ? cfg.elements_x : cfg.elements;
  const int ny = cfg.elements_y > 0 ? cfg.elements_y : cfg.elements;
  Mesh2D mesh{cfg.domain_min, cfg.domain_max, nx, ny};
  return std::make_shared<GlobalLayout>(build_layout(mesh, basis));
}

Eigen::VectorXd sample_initial(const ExperimentConfig& cfg, const GlobalLayout& layout) {
  Eigen::VectorXd u(layout.n_global);
  if (layout.dim == 1) {
    const InitialCondition ic = initial_condition_1d(cfg);
    for (int z = 0; z < layout.n_global; ++z) u(z) = ic.value(layout.xcoord(z));
    return u;
  }
  for (int z = 0; z < layout.n_global; ++z) {
    const double x = layout.xcoord(z), y = layout.ycoord(z);
    if (cfg.problem == ProblemKind::Burgers2D) {
      u(z) = std::sin(2.0 * M_PI * (x + y)) + 0.01;
    } else {
      u(z) = (std::sin(M_PI * x) + 0.01) * (std::sin(M_PI * y) + 0.01);
    }
  }
  return u;
}

}  // namespace

InitialCondition initial_condition_1d(const ExperimentConfig& cfg) {
  if (cfg.init == InitKind::SineOffset) {
    InitialCondition ic;
    ic.value = [](double x) { return std::sin(M_PI * x) + 0.01; };
    ic.derivative = [](double x) { return M_PI * std::cos(M_PI * x); };
    ic.min_value = -0.99;
    ic.max_value = 1.01;
    return ic;
  }
  auto table = std::make_shared<TableData>(load_table(cfg.init_table, cfg.domain_min,
                                                      cfg.domain_max));
  InitialCondition ic;
  ic.value = [table](double x) { return table_eval(*table, x); };
  const double h = 1e-6 * table->period;
  ic.derivative = [table, h](double x) {
    return (table_eval(*table, x + h) - table_eval(*table, x - h)) / (2.0 * h);
  };
  ic.min_value = *std::min_element(table->u.begin(), table->u.end()) - 0.1;
  ic.max_value = *std::max_element(table->u.begin(), table->u.end()) + 0.1;
  return ic;
}

std::unique_ptr<FilterOperator> build_filter(const ExperimentConfig& cfg,
                                             const GlobalLayout& layout) {
  if (cfg.correction != CorrectionModeKind::Global &&
      cfg.correction != CorrectionModeKind::Blend) {
    return nullptr;
  }
  KernelSpec spec;
  spec.moments = cfg.kernel_moments;
  spec.spline_order = cfg.kernel_order;
  if (layout.dim == 1) {
    spec.scaling = cfg.kernel_scaling * layout.dx;
    auto filter = std::make_unique<FilterOperator>(
        conservation_correction(assemble_filter_1d(spec, layout), layout));
    return filter;
  }
  spec.scaling = cfg.kernel_scaling * std::sqrt(2.0) * layout.dx;
  spec.line_angle = cfg.line_angle.value_or(M_PI / 4.0);
  return std::make_unique<FilterOperator>(
      conservation_correction(assemble_lsiac_2d(spec, layout), layout));
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  RunResult res;
  res.layout = make_layout(cfg);
  const GlobalLayout& layout = *res.layout;

  Eigen::VectorXd u = sample_initial(cfg, layout);
  const auto filter = build_filter(cfg, layout);

  CorrectionConfig corr;
  corr.kind = cfg.correction;
  corr.filter = filter.get();
  corr.dissipation = cfg.dissipation;
  corr.blend_clamp = cfg.blend_clamp;

  const bool advect = cfg.problem == ProblemKind::Advect2D;
  auto residual = [&](const SolutionField& f) {
    if (layout.dim == 1) return dg_residual_1d(f, cfg.flux);
    return advect ? advection_residual_2d(f, cfg.flux) : dg_residual_2d(f, cfg.flux);
  };

  CorrectionReport last_rep;
  last_rep.c = Eigen::VectorXd::Zero(layout.n_global);
  bool capture = false;
  RhsFn rhs = [&](const Eigen::VectorXd& v, double t) -> Eigen::VectorXd {
    SolutionField f{v, &layout, t};
    Eigen::VectorXd r = residual(f);
    if (corr.kind == CorrectionModeKind::None) {
      if (capture) {
        last_rep = CorrectionReport{};
        capture = false;
      }
      return r;
    }
    CorrectionReport rep = compute_correction(f, r, cfg.flux, corr);
    if (capture) {
      last_rep = rep;
      capture = false;
    }
    return r + rep.c;
  };

  const double speed = advect ? 1.0 : std::max(u.cwiseAbs().maxCoeff(), 1e-8);
  const double dt0 = cfg.cfl * layout.h_min / speed;
  res.dt = dt0;

  const RKTableau tab = make_tableau(cfg.stepper);
  const double t_final = cfg.t_final;
  const long max_steps =
      t_final > 0.0 ? 16 + 4 * static_cast<long>(std::ceil(t_final / dt0)) : 0;

  std::vector<double> pending = cfg.output_times;
  std::sort(pending.begin(), pending.end());

  const double land_tol = 1e-12 * std::max(1.0, t_final);
  double t = 0.0;
  long steps = 0;
  while (t < t_final - land_tol && steps < max_steps) {
    capture = true;
    Eigen::VectorXd u_next;
    double t_next = t, gamma = 1.0;
    try {
      if (cfg.relaxation) {
        // Relaxation advances by gamma dt; near the final time the step is
        // shortened and retried until gamma dt lands on t_final.
        double dt = std::min(dt0, t_final - t);
        for (int attempt = 0; attempt < 6; ++attempt) {
          StepResult sr = rrk_step(tab, u, t, dt, rhs, layout.weights);
          u_next = std::move(sr.u);
          t_next = sr.t_new;
          gamma = sr.gamma;
          const bool shortened = dt < dt0 * (1.0 - 1e-12);
          if (!shortened || std::abs(t_next - t_final) <= land_tol) break;
          dt *= (t_final - t) / (t_next - t);
        }
      } else {
        const double dt = std::min(dt0, t_final - t);
        u_next = rk_step(tab, u, t, dt, rhs);
        t_next = t + dt;
      }
    } catch (const std::runtime_error&) {
      res.status = RunResult::Status::Crashed;
      break;
    }
    if (!u_next.allFinite() || u_next.cwiseAbs().maxCoeff() > kBlowupLimit) {
      res.status = RunResult::Status::Crashed;
      break;
    }
    u = std::move(u_next);
    t = t_next;
    ++steps;

    SolutionField f{u, &layout, t};
    const auto [mass, energy] = mass_energy(f);
    TimeseriesRow row;
    row.t = t;
    row.mass = mass;
    row.energy = energy;
    row.c_rel = last_rep.rel_magnitude;
    row.blend_weight = last_rep.blend_weight;
    row.gamma = gamma;
    row.phi_diss = last_rep.phi_diss;
    res.timeseries.push_back(row);

    while (!pending.empty() && t >= pending.front() - 1e-12) {
      res.snapshots.emplace_back(t, u);
      pending.erase(pending.begin());
    }
  }

  res.state = u;
  res.final_time = t;
  res.crash_time = res.status == RunResult::Status::Crashed ? t : 0.0;
  if (res.status == RunResult::Status::Completed) {
    res.snapshots.emplace_back(t, u);
  }
  if (!cfg.output_dir.empty()) {
    write_run_artifacts(res, cfg, cfg.output_dir);
  }
  return res;
}

void write_run_artifacts(const RunResult& res, const ExperimentConfig&,
                         const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  {
    std::ofstream ts(fs::path(out_dir) / "timeseries.csv");
    ts << "t,mass,energy,c_rel,blend_weight,gamma,phi_diss\n";
    for (const auto& r : res.timeseries) {
      ts << fmt(r.t) << ',' << fmt(r.mass) << ',' << fmt(r.energy) << ',' << fmt(r.c_rel)
         << ',' << fmt(r.blend_weight) << ',' << fmt(r.gamma) << ',' << fmt(r.phi_diss)
         << '\n';
    }
  }

  const GlobalLayout& layout = *res.layout;
  for (const auto& [t, state] : res.snapshots) {
    char name[64];
    std::snprintf(name, sizeof(name), "solution_%.6f.csv", t);
    std::ofstream sol(fs::path(out_dir) / name);
    if (layout.dim == 1) {
      sol << "x,u\n";
      for (int z = 0; z < layout.n_global; ++z) {
        sol << fmt(layout.xcoord(z)) << ',' << fmt(state(z)) << '\n';
      }
    } else {
      sol << "x,y,u\n";
      for (int z = 0; z < layout.n_global; ++z) {
        sol << fmt(layout.xcoord(z)) << ',' << fmt(layout.ycoord(z)) << ',' << fmt(state(z))
            << '\n';
      }
    }
  }
}

std::vector<ConvergenceRow> convergence_study(const ExperimentConfig& base) {
  std::vector<ConvergenceRow> rows;

  struct Mode {
    std::string name;
    CorrectionModeKind kind;
    int moments = 1;
    int order = 1;
  };

  if (base.problem == ProblemKind::Burgers1D) {
    const std::vector<Mode> modes = {{"uncorrected", CorrectionModeKind::None},
                                     {"local", CorrectionModeKind::Local},
                                     {"k11", CorrectionModeKind::Global, 1, 1},
                                     {"k32", CorrectionModeKind::Global, 3, 2}};
    const std::vector<int> ns = {20, 40, 80, 160, 320};
    const InitialCondition ic = initial_condition_1d(base);
    for (const auto& mode : modes) {
      for (int p = 1; p <= 4; ++p) {
        std::vector<double> l2s, linfs;
        for (int n : ns) {
          ExperimentConfig cfg = base;
          cfg.output_dir.clear();
          cfg.elements = n;
          cfg.degree = p;
          cfg.correction = mode.kind;
          cfg.kernel_moments = mode.moments;
          cfg.kernel_order = mode.order;
          cfg.kernel_scaling = 1.0;
          cfg.dissipation.enabled = false;
          cfg.stepper = "rk44";
          cfg.relaxation = mode.kind != CorrectionModeKind::None;
          cfg.t_final = 0.5 / M_PI;
          RunResult run = run_experiment(cfg);
          SolutionField f{run.state, run.layout.get(), run.final_time};
          const double t = run.final_time;
          ErrorReport err = error_norms(
              f, [&](double x) { return burgers_exact(ic, x, t); }, 17);
          l2s.push_back(err.l2);
          linfs.push_back(err.linf);
        }
        for (std::size_t k = 0; k < ns.size(); ++k) {
          ConvergenceRow row;
          row.mode = mode.name;
          row.p = p;
          row.n = ns[k];
          row.l2 = l2s[k];
          row.linf = linfs[k];
          row.order_l2 = k == 0 ? std::nan("") : std::log2(l2s[k - 1] / l2s[k]);
          row.order_linf = k == 0 ? std::nan("") : std::log2(linfs[k - 1] / linfs[k]);
          rows.push_back(row);
        }
      }
    }
    return rows;
  }

  if (base.problem != ProblemKind::Advect2D) {
    throw std::invalid_argument("convergence_study: supported problems are burgers1d, advect2d");
  }
  const std::vector<Mode> modes = {{"uncorrected", CorrectionModeKind::None},
                                   {"lsiac", CorrectionModeKind::Global, 1, 1}};
  const std::vector<int> ns = {4, 8, 16};
  for (const auto& mode : modes) {
    for (int p = 2; p <= 3; ++p) {
      std::vector<double> l2s, linfs;
      for (int n : ns) {
        ExperimentConfig cfg = base;
        cfg.output_dir.clear();
        cfg.elements = n;
        cfg.elements_x = cfg.elements_y = 0;
        cfg.degree = p;
        cfg.correction = mode.kind;
        cfg.kernel_moments = mode.moments;
        cfg.kernel_order = mode.order;
        cfg.kernel_scaling = 1.0;
        cfg.stepper = "rk44";
        cfg.relaxation = mode.kind != CorrectionModeKind::None;
        cfg.cfl = std::min(base.cfl, 0.05);
        RunResult run = run_experiment(cfg);
        SolutionField f{run.state, run.layout.get(), run.final_time};
        const double t = run.final_time;
        auto exact = [&](double x, double y) {
          return (std::sin(M_PI * (x - t)) + 0.01) * (std::sin(M_PI * (y - t)) + 0.01);
        };
        ErrorReport err = error_norms_2d(f, exact, 6);
        l2s.push_back(err.l2);
        linfs.push_back(err.linf);
      }
      for (std::size_t k = 0; k < ns.size(); ++k) {
        ConvergenceRow row;
        row.mode = mode.name;
        row.p = p;
        row.n = ns[k];
        row.l2 = l2s[k];
        row.linf = linfs[k];
        row.order_l2 = k == 0 ? std::nan("") : std::log2(l2s[k - 1] / l2s[k]);
        row.order_linf = k == 0 ? std::nan("") : std::log2(linfs[k - 1] / linfs[k]);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, const std::string& path) {
  namespace fs = std::filesystem;
  const fs::path file(path);
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream out(file);
  out << "mode,p,N,L2,Linf,order_L2,order_Linf\n";
  for (const auto& r : rows) {
    out << r.mode << ',' << r.p << ',' << r.n << ',' << fmt(r.l2) << ',' << fmt(r.linf) << ','
        << fmt(r.order_l2) << ',' << fmt(r.order_linf) << '\n';
  }
  // Per-mode tables with the plain header as well.
  std::vector<std::string> seen;
  for (const auto& r : rows) {
    if (std::find(seen.begin(), seen.end(), r.mode) != seen.end()) continue;
    seen.push_back(r.mode);
    fs::path per = file.parent_path() / ("convergence_" + r.mode + ".csv");
    std::ofstream o(per);
    o << "p,N,L2,Linf,order_L2,order_Linf\n";
    for (const auto& q : rows) {
      if (q.mode != r.mode) continue;
      o << q.p << ',' << q.n << ',' << fmt(q.l2) << ',' << fmt(q.linf) << ','
        << fmt(q.order_l2) << ',' << fmt(q.order_linf) << '\n';
    }
  }
}

void filter_inspect(const ExperimentConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const auto layout = make_layout(cfg);

  KernelSpec spec;
  spec.moments = cfg.kernel_moments;
  spec.spline_order = cfg.kernel_order;
  FilterOperator k;
  if (layout->dim == 1) {
    spec.scaling = cfg.kernel_scaling * layout->dx;
    k = assemble_filter_1d(spec, *layout);
  } else {
    spec.scaling = cfg.kernel_scaling * std::sqrt(2.0) * layout->dx;
    spec.line_angle = cfg.line_angle.value_or(M_PI / 4.0);
    k = assemble_lsiac_2d(spec, *layout);
  }
  const FilterOperator kc = conservation_correction(k, *layout);

  {
    std::ofstream out(fs::path(out_dir) / "filter.csv");
    out << "i,j,value\n";
    for (int row = 0; row < k.rows(); ++row) {
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(k.matrix, row); it;
           ++it) {
        out << row << ',' << it.col() << ',' << fmt(it.value()) << '\n';
      }
    }
  }
  if (kc.rows() <= 2000) {
    std::ofstream out(fs::path(out_dir) / "filter_corr.csv");
    out << "i,j,value\n";
    for (int row = 0; row < kc.rows(); ++row) {
      for (int col = 0; col < kc.rows(); ++col) {
        const double v = kc.entry(row, col);
        if (v != 0.0) out << row << ',' << col << ',' << fmt(v) << '\n';
      }
    }
  } else {
    // The corrected matrix is dense through the rank-one mass fix; for large
    // layouts export the sparse part and the fix vector separately
    // (K_corr = K - 1 v^T).
    std::ofstream out(fs::path(out_dir) / "filter_corr.csv");
    out << "i,j,value\n";
    for (int row = 0; row < kc.rows(); ++row) {
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(kc.matrix, row); it;
           ++it) {
        out << row << ',' << it.col() << ',' << fmt(it.value()) << '\n';
      }
    }
    std::ofstream fix(fs::path(out_dir) / "filter_corr_rank1.csv");
    fix << "j,value\n";
    for (int j = 0; j < kc.mass_fix.size(); ++j) {
      fix << j << ',' << fmt(kc.mass_fix(j)) << '\n';
    }
  }
  {
    std::ofstream out(fs::path(out_dir) / "fourier.csv");
    out << "k,response\n";
    const double k_max = 4.0 * M_PI / spec.scaling;
    for (int i = 0; i < 512; ++i) {
      const double kk = k_max * i / 511.0;
      out << fmt(kk) << ',' << fmt(kernel_fourier(spec, kk)) << '\n';
    }
  }
}

void fv_reference_run(const ExperimentConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  if (cfg.problem != ProblemKind::Burgers1D) {
    throw std::invalid_argument("fv-reference: burgers1d only");
  }
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const InitialCondition ic = initial_condition_1d(cfg);
  const FVResult fv =
      fv_reference(cfg.fv_cells, ic.value, cfg.domain_min, cfg.domain_max, cfg.t_final);
  {
    std::ofstream out(fs::path(out_dir) / "fv_solution.csv");
    out << "x,u\n";
    for (int i = 0; i < fv.cell_centers.size(); ++i) {
      out << fmt(fv.cell_centers(i)) << ',' << fmt(fv.cell_averages(i)) << '\n';
    }
  }
  {
    std::ofstream out(fs::path(out_dir) / "fv_timeseries.csv");
    out << "t,mass,energy\n";
    for (std::size_t i = 0; i < fv.times.size(); ++i) {
      out << fmt(fv.times[i]) << ',' << fmt(fv.mass[i]) << ',' << fmt(fv.energy[i]) << '\n';
    }
  }
}

}  // namespace siacdg
