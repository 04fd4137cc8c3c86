#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fsi/assembly.hpp"
#include "fsi/geometry.hpp"

namespace fsi {

enum class Scheme { dlm, feibm, dlm_fixed_point };

enum class GeometryPreset {
  ellipse_codim1,    // closed curve, analytic parameter on [0, 2pi)
  rectangle_codim1,  // closed curve, arclength-proportional parameter
  ellipse_codim0,    // disk reference domain mapped to an ellipse
  rectangle_codim0   // square reference domain mapped to a rectangle
};

enum class FirstStep { at_rest, formal_zero };

// Velocity boundary conditions on the unit square: no-slip walls everywhere,
// or symmetry planes on the left and bottom edges (quarter-domain runs).
enum class BcPreset { walls, symmetry_quarter };

struct SimulationConfig {
  // physics
  double rho_f = 1.0;
  double delta_rho = 0.0;
  double nu = 1.0;
  double kappa = 5.0;

  // numerics
  Scheme scheme = Scheme::dlm;
  CouplingForm coupling_form = CouplingForm::L2;
  double dt = 0.1;
  double T = 2.0;
  double h_x = 1.0 / 32;
  double h_s = 1.0 / 16;
  double tol_lin = 1e-10;
  double fp_tol = 1e-8;
  int fp_max_iter = 50;
  int fp_min_iter = 1;
  FirstStep first_step = FirstStep::at_rest;
  double blowup_threshold = 10.0;

  // geometry
  GeometryPreset preset = GeometryPreset::ellipse_codim1;
  BcPreset bc = BcPreset::walls;
  double a = 0.4;  // ellipse semi-axes
  double b = 0.2;
  double rect_w = 0.25;  // rectangle sides (codim-1) / initial stretch target (codim-0)
  double rect_h = 0.1;
  Vec2 center{0.5, 0.5};

  // output
  std::string csv_name = "steps.csv";
  std::string vtk_prefix;  // empty = no field dumps

  int num_steps() const;
  bool codim0() const {
    return preset == GeometryPreset::ellipse_codim0 ||
           preset == GeometryPreset::rectangle_codim0;
  }
};

// Parses the flat key=value format with [physics]/[numerics]/[geometry]/[output]
// sections. Unknown keys and invalid values raise ConfigError naming the key;
// keys that are syntactically valid but ignored under the chosen scheme are
// reported through `warnings`.
SimulationConfig parse_config_text(const std::string& text,
                                   std::vector<std::string>* warnings = nullptr);
SimulationConfig parse_config_file(const std::string& path,
                                   std::vector<std::string>* warnings = nullptr);

// Validation used by both the parser and programmatic configs.
void validate_config(const SimulationConfig& cfg);

// Normalized round-trippable echo of a config.
std::string config_echo(const SimulationConfig& cfg);

std::string to_string(Scheme s);
std::string to_string(GeometryPreset p);
std::string to_string(CouplingForm f);
std::string to_string(BcPreset b);

}  // namespace fsi
