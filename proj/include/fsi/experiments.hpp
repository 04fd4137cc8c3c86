#pragma once

#include <string>
#include <vector>

#include "fsi/config.hpp"
#include "fsi/output.hpp"
#include "fsi/schemes.hpp"

namespace fsi {

struct RunOptions {
  std::string out_dir;            // empty: keep everything in memory
  std::vector<double> vtk_times;  // dump fields at the steps nearest these times
};

struct RunResult {
  std::string status;  // completed | energy_blowup_detected | structure_escape | solver_failure
  int exit_code = 0;   // 0 completed, 2 blow-up detected, 1 error
  int steps_completed = 0;
  double initial_energy = 0;
  double initial_area = 0;
  double final_energy_ratio = 1.0;
  std::vector<DiagnosticsRow> rows;
  State final_state;
};

// Time loop with per-step diagnostics, blow-up / escape detection, and
// (optionally) CSV, VTK, and manifest files under opts.out_dir.
RunResult run_simulation(const SimulationConfig& cfg, const RunOptions& opts = {});

struct StabilityCell {
  Scheme scheme = Scheme::dlm;
  double dt = 0, h_x = 0, h_s = 0, delta_rho = 0;
  double final_ratio = 0;
  std::string status;
};

// Scheme x time-step x mesh sweep; thin presets vary h_s at fixed h_x and
// both density excesses, thick presets vary h_x at fixed h_s. Cell failures
// are recorded and the sweep continues.
std::vector<StabilityCell> stability_map(const SimulationConfig& base,
                                         const std::string& out_dir);

struct ConvergenceLevel {
  double param = 0;  // h (space study) or dt (time study)
  double err_primary = 0;
  double err_secondary = 0;
};

struct ConvergenceResult {
  std::vector<ConvergenceLevel> levels;
  std::vector<double> rates_primary;
  std::vector<double> rates_secondary;
  double mean_rate_primary = 0;
  double mean_rate_secondary = 0;
};

// Steady-circle study at h_x = h_s = h: primary errors are velocity L2 (exact
// field is zero), secondary the pressure L2 distance to the jump field.
ConvergenceResult space_convergence(const std::vector<double>& hs,
                                    const std::string& out_dir);

// Thick-ellipse relaxation compared against a small-dt reference at fixed
// meshes: primary errors are structure L2, secondary velocity L2.
ConvergenceResult time_convergence(const std::vector<double>& dts, double ref_dt,
                                   const std::string& out_dir);

struct MassCompareResult {
  std::vector<double> t;
  std::vector<double> area_dlm;
  std::vector<double> area_feibm;
  double initial_area = 0;
  double drift_dlm = 0;    // |area(T) - area(0)| / area(0)
  double drift_feibm = 0;
  std::string status_dlm;
  std::string status_feibm;
};

MassCompareResult mass_compare(const SimulationConfig& cfg, const std::string& out_dir);

struct FixedPointStudy {
  std::vector<std::vector<double>> histories;  // residuals per time step
  std::vector<double> contraction;             // geometric-mean factor per step
};

FixedPointStudy fixed_point_study(const SimulationConfig& cfg,
                                  const std::string& out_dir);

}  // namespace fsi
