#include "fsi/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <memory>
#include <set>
#include <stdexcept>

#include "fsi/diagnostics.hpp"
#include "fsi/errors.hpp"

namespace fsi {

namespace {

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool all_finite(const DiagnosticsRow& r) {
  return std::isfinite(r.kinetic_fluid) && std::isfinite(r.kinetic_structure) &&
         std::isfinite(r.elastic) && std::isfinite(r.total_energy) &&
         std::isfinite(r.energy_ratio) && std::isfinite(r.energy_ineq_lhs) &&
         std::isfinite(r.area) && std::isfinite(r.div_residual) &&
         std::isfinite(r.coupling_residual);
}

std::string sanitize_csv_field(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

RunResult run_simulation(const SimulationConfig& cfg, const RunOptions& opts) {
  validate_config(cfg);
  Simulation sim(cfg);
  const ConstantBlocks& blocks = sim.blocks();
  const FluidMesh& mesh = sim.fluid_mesh();
  const StructureMesh& s = sim.structure();

  const bool writing = !opts.out_dir.empty();
  std::unique_ptr<CsvWriter> csv;
  if (writing) {
    std::filesystem::create_directories(opts.out_dir);
    csv = std::make_unique<CsvWriter>(opts.out_dir + "/" + cfg.csv_name);
  }

  const int n_steps = cfg.num_steps();
  std::set<int> vtk_steps;
  for (double t : opts.vtk_times)
    vtk_steps.insert(std::clamp(static_cast<int>(std::lround(t / cfg.dt)), 0, n_steps));
  const std::string prefix = cfg.vtk_prefix.empty() ? "fields" : cfg.vtk_prefix;
  const auto dump_vtk = [&](int step) {
    if (!writing || vtk_steps.count(step) == 0) return;
    const State& st = sim.state();
    const std::string tag = prefix + "_" + std::to_string(step);
    write_fluid_vtk(opts.out_dir + "/" + tag + "_fluid.vtk", mesh, st.u, st.p);
    write_structure_vtk(opts.out_dir + "/" + tag + "_structure.vtk", s, st.X);
  };

  RunResult res;
  res.status = "completed";
  {
    const State& st0 = sim.state();
    res.initial_energy = total_energy(blocks, cfg, st0.u, st0.X, st0.X_prev).total();
    res.initial_area = enclosed_area(s, st0.X);
  }
  dump_vtk(0);

  for (int n = 0; n < n_steps; ++n) {
    const State old = sim.state();
    try {
      sim.advance();
    } catch (const StructureEscapeError&) {
      res.status = "structure_escape";
      res.exit_code = 1;
      break;
    } catch (const SolverError&) {
      res.status = "solver_failure";
      res.exit_code = 1;
      break;
    }
    const State& now = sim.state();

    DiagnosticsRow row;
    row.step = now.step;
    row.t = now.t;
    const EnergyBreakdown eb = total_energy(blocks, cfg, now.u, now.X, now.X_prev);
    row.kinetic_fluid = eb.kinetic_fluid;
    row.kinetic_structure = eb.kinetic_structure;
    row.elastic = eb.elastic;
    row.total_energy = eb.total();
    row.energy_ratio =
        res.initial_energy == 0
            ? (row.total_energy == 0 ? 1.0 : std::numeric_limits<double>::infinity())
            : row.total_energy / res.initial_energy;
    row.energy_ineq_lhs =
        energy_inequality_lhs(blocks, cfg, now.u, old.u, now.X, old.X, old.X_prev);
    row.area = enclosed_area(s, now.X);
    row.div_residual = div_residual(blocks, now.u);
    // The coupling residual (like the next step's assembly) needs every node
    // inside the domain, so scan the new positions before touching it.
    bool escaped = false;
    for (int i = 0; i < s.num_nodes(); ++i) {
      const Vec2 xi(now.X[2 * i], now.X[2 * i + 1]);
      if (!locate_point(mesh, xi)) {
        escaped = true;
        break;
      }
    }
    row.coupling_residual =
        escaped ? std::numeric_limits<double>::quiet_NaN()
                : coupling_residual(mesh, s, blocks, cfg, now.u, now.X, old.X);

    bool terminal = false;
    if (escaped && !(row.energy_ratio > cfg.blowup_threshold)) {
      row.status = "structure_escape";
      res.exit_code = 1;
      terminal = true;
    } else if (!all_finite(row) || row.energy_ratio > cfg.blowup_threshold) {
      row.status = "energy_blowup_detected";
      res.exit_code = 2;
      terminal = true;
    }
    if (terminal)
      res.status = row.status;
    else if (now.step == n_steps)
      row.status = "completed";

    res.rows.push_back(row);
    if (csv) csv->write(row);
    res.steps_completed = now.step;
    res.final_energy_ratio = row.energy_ratio;
    dump_vtk(now.step);
    if (terminal) break;
  }
  res.final_state = sim.state();

  if (writing) {
    write_manifest(opts.out_dir + "/manifest.json", cfg, res.status,
                   res.steps_completed, cfg.csv_name);
    std::ofstream echo(opts.out_dir + "/config_echo.ini");
    echo << config_echo(cfg);
  }
  return res;
}

std::vector<StabilityCell> stability_map(const SimulationConfig& base,
                                         const std::string& out_dir) {
  const bool thick = base.codim0();
  const std::vector<Scheme> schemes = {Scheme::dlm, Scheme::feibm};
  const std::vector<double> dts = {0.1, 0.05};
  const std::vector<double> hx_list =
      thick ? std::vector<double>{1.0 / 4, 1.0 / 8, 1.0 / 16}
            : std::vector<double>{base.h_x};
  const std::vector<double> hs_list =
      thick ? std::vector<double>{base.h_s}
            : std::vector<double>{1.0 / 8, 1.0 / 16, 1.0 / 32};
  const std::vector<double> drho_list = thick ? std::vector<double>{base.delta_rho}
                                              : std::vector<double>{0.0, 0.3};

  std::vector<StabilityCell> cells;
  for (Scheme scheme : schemes)
    for (double dt : dts)
      for (double hx : hx_list)
        for (double hs : hs_list)
          for (double drho : drho_list) {
            SimulationConfig cfg = base;
            cfg.scheme = scheme;
            cfg.dt = dt;
            cfg.h_x = hx;
            cfg.h_s = hs;
            cfg.delta_rho = drho;
            StabilityCell cell;
            cell.scheme = scheme;
            cell.dt = dt;
            cell.h_x = hx;
            cell.h_s = hs;
            cell.delta_rho = drho;
            try {
              const RunResult r = run_simulation(cfg, {});
              cell.final_ratio = r.final_energy_ratio;
              cell.status = r.status;
            } catch (const std::exception& e) {
              cell.final_ratio = std::numeric_limits<double>::quiet_NaN();
              cell.status = sanitize_csv_field(std::string("error: ") + e.what());
            }
            cells.push_back(cell);
          }

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream out(out_dir + "/stability_map.csv");
    out << "scheme,dt,h_x,h_s,delta_rho,final_ratio,status\n";
    for (const StabilityCell& c : cells)
      out << to_string(c.scheme) << ',' << g17(c.dt) << ',' << g17(c.h_x) << ','
          << g17(c.h_s) << ',' << g17(c.delta_rho) << ',' << g17(c.final_ratio)
          << ',' << c.status << '\n';
  }
  return cells;
}

namespace {

void finish_rates(ConvergenceResult& res) {
  std::vector<std::pair<double, double>> primary, secondary;
  for (const ConvergenceLevel& l : res.levels) {
    primary.emplace_back(l.param, l.err_primary);
    secondary.emplace_back(l.param, l.err_secondary);
  }
  res.rates_primary = fit_rates(primary);
  res.rates_secondary = fit_rates(secondary);
  const auto mean = [](const std::vector<double>& v) {
    double sum = 0;
    for (double x : v) sum += x;
    return sum / v.size();
  };
  res.mean_rate_primary = mean(res.rates_primary);
  res.mean_rate_secondary = mean(res.rates_secondary);
}

void write_convergence_csv(const std::string& path, const char* param_name,
                           const char* primary_name, const char* secondary_name,
                           const ConvergenceResult& res) {
  std::ofstream out(path);
  out << param_name << ',' << primary_name << ',' << primary_name << "_rate,"
      << secondary_name << ',' << secondary_name << "_rate\n";
  for (size_t i = 0; i < res.levels.size(); ++i) {
    const ConvergenceLevel& l = res.levels[i];
    out << g17(l.param) << ',' << g17(l.err_primary) << ','
        << (i == 0 ? std::string() : g17(res.rates_primary[i - 1])) << ','
        << g17(l.err_secondary) << ','
        << (i == 0 ? std::string() : g17(res.rates_secondary[i - 1])) << '\n';
  }
}

constexpr double kPi = 3.1415926535897932384626433832795;

}  // namespace

ConvergenceResult space_convergence(const std::vector<double>& hs,
                                    const std::string& out_dir) {
  if (hs.size() < 2)
    throw ConfigError("space convergence: need at least two mesh levels");
  ConvergenceResult res;
  for (double h : hs) {
    SimulationConfig cfg;
    cfg.scheme = Scheme::dlm;
    cfg.preset = GeometryPreset::ellipse_codim1;
    cfg.a = cfg.b = 0.3;  // circle at its elastic equilibrium
    cfg.kappa = 5;
    cfg.nu = 1;
    cfg.delta_rho = 0;
    cfg.dt = 0.1;
    cfg.T = 1.0;
    cfg.h_x = h;
    cfg.h_s = h;
    const RunResult r = run_simulation(cfg, {});
    if (r.status != "completed")
      throw SolverError("space convergence: level h=" + g17(h) +
                        " ended with status " + r.status);

    ConvergenceLevel level;
    level.param = h;
    // Exact steady velocity is zero, so the error is the velocity norm itself,
    // recoverable from the kinetic energy.
    level.err_primary = std::sqrt(2.0 * r.rows.back().kinetic_fluid / cfg.rho_f);
    const int n = std::max(1, static_cast<int>(std::lround(1.0 / h)));
    const FluidMesh mesh = build_unit_square_mesh(n);
    const double radius = std::sqrt(r.rows.back().area / kPi);
    level.err_secondary = pressure_l2_error_circle(mesh, r.final_state.p, cfg.center,
                                                   radius, cfg.kappa);
    res.levels.push_back(level);
  }
  finish_rates(res);
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_convergence_csv(out_dir + "/convergence_space.csv", "h", "err_u", "err_p",
                          res);
  }
  return res;
}

ConvergenceResult time_convergence(const std::vector<double>& dts, double ref_dt,
                                   const std::string& out_dir) {
  if (dts.size() < 2)
    throw ConfigError("time convergence: need at least two time-step levels");
  for (double dt : dts)
    if (!(dt > ref_dt))
      throw ConfigError("time convergence: every dt must exceed the reference dt");

  SimulationConfig base;
  base.scheme = Scheme::dlm;
  base.preset = GeometryPreset::ellipse_codim0;
  base.a = 0.4;
  base.b = 0.2;
  base.kappa = 1;
  base.nu = 0.05;
  base.delta_rho = 0.3;
  base.h_x = 1.0 / 16;
  base.h_s = 1.0 / 16;
  base.T = 1.0;

  base.dt = ref_dt;
  const RunResult ref = run_simulation(base, {});
  if (ref.status != "completed")
    throw SolverError("time convergence: reference run ended with status " +
                      ref.status);

  const FluidMesh mesh = build_unit_square_mesh(16);
  const StructureMesh s = build_structure(base);
  const ConstantBlocks blocks = precompute_blocks(mesh, s, base.coupling_form);

  ConvergenceResult res;
  for (double dt : dts) {
    SimulationConfig cfg = base;
    cfg.dt = dt;
    const RunResult r = run_simulation(cfg, {});
    if (r.status != "completed")
      throw SolverError("time convergence: level dt=" + g17(dt) +
                        " ended with status " + r.status);
    const Vector ex = r.final_state.X - ref.final_state.X;
    const Vector eu = r.final_state.u - ref.final_state.u;
    ConvergenceLevel level;
    level.param = dt;
    level.err_primary = std::sqrt(ex.dot(blocks.Ms * ex));
    level.err_secondary = std::sqrt(eu.dot(blocks.Mf * eu));
    res.levels.push_back(level);
  }
  finish_rates(res);
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_convergence_csv(out_dir + "/convergence_time.csv", "dt", "err_X", "err_u",
                          res);
  }
  return res;
}

MassCompareResult mass_compare(const SimulationConfig& cfg_in,
                               const std::string& out_dir) {
  if (cfg_in.codim0())
    throw ConfigError("mass compare: needs a closed-curve geometry preset");
  MassCompareResult res;

  SimulationConfig cfg = cfg_in;
  cfg.scheme = Scheme::dlm;
  const RunResult dlm = run_simulation(cfg, {});
  cfg.scheme = Scheme::feibm;
  const RunResult feibm = run_simulation(cfg, {});

  res.initial_area = dlm.initial_area;
  res.status_dlm = dlm.status;
  res.status_feibm = feibm.status;
  const auto drift = [](const RunResult& r) {
    const double a0 = r.initial_area;
    const double aT = r.rows.empty() ? a0 : r.rows.back().area;
    return std::abs(aT - a0) / std::abs(a0);
  };
  res.drift_dlm = drift(dlm);
  res.drift_feibm = drift(feibm);

  const size_t n = std::min(dlm.rows.size(), feibm.rows.size());
  for (size_t i = 0; i < n; ++i) {
    res.t.push_back(dlm.rows[i].t);
    res.area_dlm.push_back(dlm.rows[i].area);
    res.area_feibm.push_back(feibm.rows[i].area);
  }

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream out(out_dir + "/mass_compare.csv");
    out << "step,t,area_dlm,area_feibm\n";
    out << "0," << g17(0.0) << ',' << g17(dlm.initial_area) << ','
        << g17(feibm.initial_area) << '\n';
    for (size_t i = 0; i < n; ++i)
      out << (i + 1) << ',' << g17(res.t[i]) << ',' << g17(res.area_dlm[i]) << ','
          << g17(res.area_feibm[i]) << '\n';
    std::ofstream summary(out_dir + "/mass_drift.csv");
    summary << "scheme,status,initial_area,final_area,relative_drift\n";
    summary << "dlm," << dlm.status << ',' << g17(dlm.initial_area) << ','
            << g17(dlm.rows.empty() ? dlm.initial_area : dlm.rows.back().area) << ','
            << g17(res.drift_dlm) << '\n';
    summary << "feibm," << feibm.status << ',' << g17(feibm.initial_area) << ','
            << g17(feibm.rows.empty() ? feibm.initial_area : feibm.rows.back().area)
            << ',' << g17(res.drift_feibm) << '\n';
  }
  return res;
}

FixedPointStudy fixed_point_study(const SimulationConfig& cfg_in,
                                  const std::string& out_dir) {
  SimulationConfig cfg = cfg_in;
  cfg.scheme = Scheme::dlm_fixed_point;
  validate_config(cfg);
  Simulation sim(cfg);

  FixedPointStudy study;
  const int n_steps = cfg.num_steps();
  for (int n = 0; n < n_steps; ++n) {
    sim.advance();
    study.histories.push_back(sim.fixed_point_residuals());
    const std::vector<double>& h = study.histories.back();
    study.contraction.push_back(
        h.size() >= 2 && h.front() > 0
            ? std::pow(h.back() / h.front(), 1.0 / (h.size() - 1))
            : std::numeric_limits<double>::quiet_NaN());
  }

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream out(out_dir + "/fixed_point.csv");
    out << "step,iteration,residual\n";
    for (size_t s = 0; s < study.histories.size(); ++s)
      for (size_t k = 0; k < study.histories[s].size(); ++k)
        out << (s + 1) << ',' << (k + 1) << ',' << g17(study.histories[s][k]) << '\n';
  }
  return study;
}

}  // namespace fsi
