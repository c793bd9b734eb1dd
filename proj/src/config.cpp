#include "siacdg/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "siacdg/timeint.hpp"

namespace siacdg {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    throw std::invalid_argument("config: bad number for '" + key + "': " + v);
  }
}

int to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const int i = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return i;
  } catch (...) {
    throw std::invalid_argument("config: bad integer for '" + key + "': " + v);
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument("config: bad boolean for '" + key + "': " + v);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* problem_name(ProblemKind p) {
  switch (p) {
    case ProblemKind::Burgers1D: return "burgers1d";
    case ProblemKind::Burgers2D: return "burgers2d";
    case ProblemKind::Advect2D: return "advect2d";
  }
  return "burgers1d";
}

const char* mode_name(CorrectionModeKind m) {
  switch (m) {
    case CorrectionModeKind::None: return "none";
    case CorrectionModeKind::Local: return "local";
    case CorrectionModeKind::Global: return "global";
    case CorrectionModeKind::Blend: return "blend";
  }
  return "none";
}

}  // namespace

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

ExperimentConfig ExperimentConfig::parse_string(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: expected 'key = value', got: " + line);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));

    if (key == "problem") {
      if (val == "burgers1d") cfg.problem = ProblemKind::Burgers1D;
      else if (val == "burgers2d") cfg.problem = ProblemKind::Burgers2D;
      else if (val == "advect2d") cfg.problem = ProblemKind::Advect2D;
      else throw std::invalid_argument("config: unknown problem '" + val + "'");
    } else if (key == "domain.min") {
      cfg.domain_min = to_double(key, val);
    } else if (key == "domain.max") {
      cfg.domain_max = to_double(key, val);
    } else if (key == "mesh.elements") {
      cfg.elements = to_int(key, val);
    } else if (key == "mesh.elements_x") {
      cfg.elements_x = to_int(key, val);
    } else if (key == "mesh.elements_y") {
      cfg.elements_y = to_int(key, val);
    } else if (key == "basis.degree") {
      cfg.degree = to_int(key, val);
    } else if (key == "flux") {
      if (val == "llf") cfg.flux = FluxKind::LocalLaxFriedrichs;
      else if (val == "central") cfg.flux = FluxKind::Central;
      else throw std::invalid_argument("config: unknown flux '" + val + "'");
    } else if (key == "correction.mode") {
      if (val == "none") cfg.correction = CorrectionModeKind::None;
      else if (val == "local") cfg.correction = CorrectionModeKind::Local;
      else if (val == "global") cfg.correction = CorrectionModeKind::Global;
      else if (val == "blend") cfg.correction = CorrectionModeKind::Blend;
      else throw std::invalid_argument("config: unknown correction mode '" + val + "'");
    } else if (key == "correction.kernel.moments") {
      cfg.kernel_moments = to_int(key, val);
    } else if (key == "correction.kernel.order") {
      cfg.kernel_order = to_int(key, val);
    } else if (key == "correction.kernel.scaling") {
      cfg.kernel_scaling = to_double(key, val);
    } else if (key == "correction.kernel.line_angle") {
      cfg.line_angle = to_double(key, val);
    } else if (key == "correction.blend_clamp") {
      cfg.blend_clamp = to_bool(key, val);
    } else if (key == "dissipation.enabled") {
      cfg.dissipation.enabled = to_bool(key, val);
    } else if (key == "dissipation.c_e") {
      cfg.dissipation.c_e = to_double(key, val);
    } else if (key == "dissipation.c_max") {
      cfg.dissipation.c_max = to_double(key, val);
    } else if (key == "time.stepper") {
      cfg.stepper = val;
    } else if (key == "time.relaxation") {
      cfg.relaxation = to_bool(key, val);
    } else if (key == "time.cfl") {
      cfg.cfl = to_double(key, val);
    } else if (key == "time.t_final") {
      cfg.t_final = to_double(key, val);
    } else if (key == "init.kind") {
      if (val == "sine_offset") cfg.init = InitKind::SineOffset;
      else if (val == "table") cfg.init = InitKind::Table;
      else throw std::invalid_argument("config: unknown init kind '" + val + "'");
    } else if (key == "init.table") {
      cfg.init_table = val;
    } else if (key == "output.dir") {
      cfg.output_dir = val;
    } else if (key == "output.times") {
      cfg.output_times.clear();
      std::istringstream ts(val);
      std::string tok;
      while (std::getline(ts, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) cfg.output_times.push_back(to_double(key, tok));
      }
    } else if (key == "fv.cells") {
      cfg.fv_cells = to_int(key, val);
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  return cfg;
}

std::string ExperimentConfig::serialize() const {
  std::ostringstream out;
  out << "problem = " << problem_name(problem) << "\n";
  out << "domain.min = " << fmt(domain_min) << "\n";
  out << "domain.max = " << fmt(domain_max) << "\n";
  out << "mesh.elements = " << elements << "\n";
  if (elements_x > 0) out << "mesh.elements_x = " << elements_x << "\n";
  if (elements_y > 0) out << "mesh.elements_y = " << elements_y << "\n";
  out << "basis.degree = " << degree << "\n";
  out << "flux = " << (flux == FluxKind::Central ? "central" : "llf") << "\n";
  out << "correction.mode = " << mode_name(correction) << "\n";
  out << "correction.kernel.moments = " << kernel_moments << "\n";
  out << "correction.kernel.order = " << kernel_order << "\n";
  out << "correction.kernel.scaling = " << fmt(kernel_scaling) << "\n";
  if (line_angle) out << "correction.kernel.line_angle = " << fmt(*line_angle) << "\n";
  out << "correction.blend_clamp = " << (blend_clamp ? "true" : "false") << "\n";
  out << "dissipation.enabled = " << (dissipation.enabled ? "true" : "false") << "\n";
  out << "dissipation.c_e = " << fmt(dissipation.c_e) << "\n";
  out << "dissipation.c_max = " << fmt(dissipation.c_max) << "\n";
  out << "time.stepper = " << stepper << "\n";
  out << "time.relaxation = " << (relaxation ? "true" : "false") << "\n";
  out << "time.cfl = " << fmt(cfl) << "\n";
  out << "time.t_final = " << fmt(t_final) << "\n";
  out << "init.kind = " << (init == InitKind::SineOffset ? "sine_offset" : "table") << "\n";
  if (!init_table.empty()) out << "init.table = " << init_table << "\n";
  if (!output_dir.empty()) out << "output.dir = " << output_dir << "\n";
  if (!output_times.empty()) {
    out << "output.times = ";
    for (std::size_t i = 0; i < output_times.size(); ++i) {
      if (i) out << ",";
      out << fmt(output_times[i]);
    }
    out << "\n";
  }
  out << "fv.cells = " << fv_cells << "\n";
  return out.str();
}

void ExperimentConfig::validate() const {
  if (degree < 1 || degree > 20) throw std::invalid_argument("config: basis.degree out of [1,20]");
  if (domain_max <= domain_min) throw std::invalid_argument("config: empty domain");
  if (elements < 1) throw std::invalid_argument("config: mesh.elements must be >= 1");
  if (elements_x < 0 || elements_y < 0) throw std::invalid_argument("config: negative mesh size");
  if (cfl <= 0.0) throw std::invalid_argument("config: time.cfl must be > 0");
  if (t_final < 0.0) throw std::invalid_argument("config: time.t_final must be >= 0");
  if (kernel_moments < 1) throw std::invalid_argument("config: kernel moments must be >= 1");
  if (kernel_order < 1) throw std::invalid_argument("config: kernel order must be >= 1");
  if (kernel_scaling <= 0.0) throw std::invalid_argument("config: kernel scaling must be > 0");
  if (fv_cells < 10) throw std::invalid_argument("config: fv.cells must be >= 10");

  make_tableau(stepper);  // throws on unknown names
  if (relaxation && stepper == "fe") {
    throw std::invalid_argument("config: relaxation is unsupported with the fe stepper");
  }
  if (dissipation.enabled) {
    if (dissipation.c_e < 0.0 || dissipation.c_max < 0.0) {
      throw std::invalid_argument("config: dissipation parameters must be nonnegative");
    }
    if (correction == CorrectionModeKind::None) {
      throw std::invalid_argument("config: dissipation requires an active correction mode");
    }
  }
  if (problem == ProblemKind::Advect2D) {
    if (correction == CorrectionModeKind::Local || correction == CorrectionModeKind::Blend) {
      throw std::invalid_argument("config: advect2d supports correction modes none/global only");
    }
    if (dissipation.enabled) {
      throw std::invalid_argument("config: advect2d does not support dissipation");
    }
  }
  if (init == InitKind::Table) {
    if (init_table.empty()) throw std::invalid_argument("config: init.table path missing");
    if (problem != ProblemKind::Burgers1D) {
      throw std::invalid_argument("config: table initial data is 1D only");
    }
  }
}

}  // namespace siacdg
