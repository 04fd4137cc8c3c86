#include "fsi/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "fsi/errors.hpp"

namespace fsi {

int SimulationConfig::num_steps() const {
  return static_cast<int>(std::lround(T / dt));
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Accepts plain decimals and "p/q" fractions so mesh sizes match the exact
// binary values of 1/8, 1/16, ...
double parse_number(const std::string& key, const std::string& value) {
  const auto slash = value.find('/');
  try {
    size_t used = 0;
    if (slash != std::string::npos) {
      const double num = std::stod(trim(value.substr(0, slash)), &used);
      const double den = std::stod(trim(value.substr(slash + 1)), &used);
      if (den == 0) throw ConfigError("config key '" + key + "': division by zero");
      return num / den;
    }
    const std::string v = trim(value);
    const double x = std::stod(v, &used);
    if (used != v.size())
      throw ConfigError("config key '" + key + "': trailing characters in '" + value + "'");
    return x;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse number '" + value + "'");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  const double x = parse_number(key, value);
  const int i = static_cast<int>(std::lround(x));
  if (std::abs(x - i) > 1e-12)
    throw ConfigError("config key '" + key + "': expected integer, got '" + value + "'");
  return i;
}

}  // namespace

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::dlm: return "dlm";
    case Scheme::feibm: return "feibm";
    default: return "dlm_fixed_point";
  }
}

std::string to_string(GeometryPreset p) {
  switch (p) {
    case GeometryPreset::ellipse_codim1: return "ellipse_codim1";
    case GeometryPreset::rectangle_codim1: return "rectangle_codim1";
    case GeometryPreset::ellipse_codim0: return "ellipse_codim0";
    default: return "rectangle_codim0";
  }
}

std::string to_string(CouplingForm f) { return f == CouplingForm::L2 ? "l2" : "h1"; }

std::string to_string(BcPreset b) {
  return b == BcPreset::walls ? "walls" : "symmetry_quarter";
}

void validate_config(const SimulationConfig& cfg) {
  const auto positive = [](double v, const char* key) {
    if (!(v > 0)) throw ConfigError(std::string("config key '") + key + "': must be > 0");
  };
  const auto nonnegative = [](double v, const char* key) {
    if (!(v >= 0)) throw ConfigError(std::string("config key '") + key + "': must be >= 0");
  };
  positive(cfg.rho_f, "rho_f");
  positive(cfg.nu, "nu");
  nonnegative(cfg.kappa, "kappa");
  nonnegative(cfg.delta_rho, "delta_rho");
  positive(cfg.dt, "dt");
  nonnegative(cfg.T, "T");
  positive(cfg.h_x, "h_x");
  if (cfg.h_x > 1.0) throw ConfigError("config key 'h_x': must be <= 1");
  positive(cfg.h_s, "h_s");
  positive(cfg.tol_lin, "tol_lin");
  positive(cfg.fp_tol, "fp_tol");
  if (cfg.fp_max_iter < 1) throw ConfigError("config key 'fp_max_iter': must be >= 1");
  if (cfg.fp_min_iter < 1 || cfg.fp_min_iter > cfg.fp_max_iter)
    throw ConfigError("config key 'fp_min_iter': must lie in [1, fp_max_iter]");
  if (cfg.blowup_threshold <= 1)
    throw ConfigError("config key 'blowup_threshold': must be > 1");
  positive(cfg.a, "a");
  positive(cfg.b, "b");
  positive(cfg.rect_w, "w");
  positive(cfg.rect_h, "h");
}

SimulationConfig parse_config_text(const std::string& text,
                                   std::vector<std::string>* warnings) {
  SimulationConfig cfg;
  std::map<std::string, bool> seen;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) + ": malformed section");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "physics" && section != "numerics" && section != "geometry" &&
          section != "output")
        throw ConfigError("unknown config section '" + section + "'");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string full = section.empty() ? key : section + "." + key;
    seen[full] = true;

    if (full == "physics.rho_f") cfg.rho_f = parse_number(key, value);
    else if (full == "physics.delta_rho") cfg.delta_rho = parse_number(key, value);
    else if (full == "physics.nu") cfg.nu = parse_number(key, value);
    else if (full == "physics.kappa") cfg.kappa = parse_number(key, value);
    else if (full == "numerics.scheme") {
      if (value == "dlm") cfg.scheme = Scheme::dlm;
      else if (value == "feibm") cfg.scheme = Scheme::feibm;
      else if (value == "dlm_fixed_point") cfg.scheme = Scheme::dlm_fixed_point;
      else throw ConfigError("config key 'scheme': unknown value '" + value + "'");
    } else if (full == "numerics.coupling_form") {
      if (value == "l2") cfg.coupling_form = CouplingForm::L2;
      else if (value == "h1") cfg.coupling_form = CouplingForm::H1;
      else throw ConfigError("config key 'coupling_form': unknown value '" + value + "'");
    } else if (full == "numerics.dt") cfg.dt = parse_number(key, value);
    else if (full == "numerics.T") cfg.T = parse_number(key, value);
    else if (full == "numerics.h_x") cfg.h_x = parse_number(key, value);
    else if (full == "numerics.h_s") cfg.h_s = parse_number(key, value);
    else if (full == "numerics.tol_lin") cfg.tol_lin = parse_number(key, value);
    else if (full == "numerics.fp_tol") cfg.fp_tol = parse_number(key, value);
    else if (full == "numerics.fp_max_iter") cfg.fp_max_iter = parse_int(key, value);
    else if (full == "numerics.fp_min_iter") cfg.fp_min_iter = parse_int(key, value);
    else if (full == "numerics.first_step") {
      if (value == "at_rest") cfg.first_step = FirstStep::at_rest;
      else if (value == "formal_zero") cfg.first_step = FirstStep::formal_zero;
      else throw ConfigError("config key 'first_step': unknown value '" + value + "'");
    } else if (full == "numerics.blowup_threshold")
      cfg.blowup_threshold = parse_number(key, value);
    else if (full == "geometry.preset") {
      if (value == "ellipse_codim1") cfg.preset = GeometryPreset::ellipse_codim1;
      else if (value == "rectangle_codim1") cfg.preset = GeometryPreset::rectangle_codim1;
      else if (value == "ellipse_codim0") cfg.preset = GeometryPreset::ellipse_codim0;
      else if (value == "rectangle_codim0") cfg.preset = GeometryPreset::rectangle_codim0;
      else throw ConfigError("config key 'preset': unknown value '" + value + "'");
    } else if (full == "geometry.bc") {
      if (value == "walls") cfg.bc = BcPreset::walls;
      else if (value == "symmetry_quarter") cfg.bc = BcPreset::symmetry_quarter;
      else throw ConfigError("config key 'bc': unknown value '" + value + "'");
    } else if (full == "geometry.a") cfg.a = parse_number(key, value);
    else if (full == "geometry.b") cfg.b = parse_number(key, value);
    else if (full == "geometry.w") cfg.rect_w = parse_number(key, value);
    else if (full == "geometry.h") cfg.rect_h = parse_number(key, value);
    else if (full == "geometry.center_x") cfg.center.x = parse_number(key, value);
    else if (full == "geometry.center_y") cfg.center.y = parse_number(key, value);
    else if (full == "output.csv") cfg.csv_name = value;
    else if (full == "output.vtk_prefix") cfg.vtk_prefix = value;
    else throw ConfigError("unknown config key '" + full + "'");
  }

  validate_config(cfg);
  if (warnings) {
    if (cfg.scheme == Scheme::feibm && seen.count("numerics.coupling_form"))
      warnings->push_back("key 'coupling_form' is ignored when scheme=feibm");
    if (cfg.scheme != Scheme::dlm_fixed_point &&
        (seen.count("numerics.fp_tol") || seen.count("numerics.fp_max_iter") ||
         seen.count("numerics.fp_min_iter")))
      warnings->push_back("fixed-point keys are ignored unless scheme=dlm_fixed_point");
  }
  return cfg;
}

SimulationConfig parse_config_file(const std::string& path,
                                   std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), warnings);
}

std::string config_echo(const SimulationConfig& cfg) {
  char buf[64];
  std::ostringstream out;
  const auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  out << "[physics]\n";
  out << "rho_f = " << num(cfg.rho_f) << "\n";
  out << "delta_rho = " << num(cfg.delta_rho) << "\n";
  out << "nu = " << num(cfg.nu) << "\n";
  out << "kappa = " << num(cfg.kappa) << "\n";
  out << "[numerics]\n";
  out << "scheme = " << to_string(cfg.scheme) << "\n";
  out << "coupling_form = " << to_string(cfg.coupling_form) << "\n";
  out << "dt = " << num(cfg.dt) << "\n";
  out << "T = " << num(cfg.T) << "\n";
  out << "h_x = " << num(cfg.h_x) << "\n";
  out << "h_s = " << num(cfg.h_s) << "\n";
  out << "tol_lin = " << num(cfg.tol_lin) << "\n";
  out << "fp_tol = " << num(cfg.fp_tol) << "\n";
  out << "fp_max_iter = " << cfg.fp_max_iter << "\n";
  out << "fp_min_iter = " << cfg.fp_min_iter << "\n";
  out << "first_step = "
      << (cfg.first_step == FirstStep::at_rest ? "at_rest" : "formal_zero") << "\n";
  out << "blowup_threshold = " << num(cfg.blowup_threshold) << "\n";
  out << "[geometry]\n";
  out << "preset = " << to_string(cfg.preset) << "\n";
  out << "bc = " << to_string(cfg.bc) << "\n";
  out << "a = " << num(cfg.a) << "\n";
  out << "b = " << num(cfg.b) << "\n";
  out << "w = " << num(cfg.rect_w) << "\n";
  out << "h = " << num(cfg.rect_h) << "\n";
  out << "center_x = " << num(cfg.center.x) << "\n";
  out << "center_y = " << num(cfg.center.y) << "\n";
  out << "[output]\n";
  out << "csv = " << cfg.csv_name << "\n";
  if (!cfg.vtk_prefix.empty()) out << "vtk_prefix = " << cfg.vtk_prefix << "\n";
  return out.str();
}

}  // namespace fsi
