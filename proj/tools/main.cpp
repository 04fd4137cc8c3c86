#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fsi/config.hpp"
#include "fsi/errors.hpp"
#include "fsi/experiments.hpp"
#include "fsi/output.hpp"

namespace {

fsi::SimulationConfig load_config(const std::string& path) {
  if (path.empty()) return fsi::SimulationConfig{};
  std::vector<std::string> warnings;
  fsi::SimulationConfig cfg = fsi::parse_config_file(path, &warnings);
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
  return cfg;
}

void print_convergence(const char* param, const fsi::ConvergenceResult& res,
                       const char* primary, const char* secondary) {
  std::printf("%-10s %-14s %-8s %-14s %-8s\n", param, primary, "rate", secondary,
              "rate");
  for (size_t i = 0; i < res.levels.size(); ++i) {
    const fsi::ConvergenceLevel& l = res.levels[i];
    if (i == 0)
      std::printf("%-10.6g %-14.6g %-8s %-14.6g %-8s\n", l.param, l.err_primary, "-",
                  l.err_secondary, "-");
    else
      std::printf("%-10.6g %-14.6g %-8.3f %-14.6g %-8.3f\n", l.param, l.err_primary,
                  res.rates_primary[i - 1], l.err_secondary,
                  res.rates_secondary[i - 1]);
  }
  std::printf("mean rates: %s=%.3f %s=%.3f\n", primary, res.mean_rate_primary,
              secondary, res.mean_rate_secondary);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D fluid-structure interaction benchmarks (DLM-IBM / FE-IBM)"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::vector<double> vtk_times;
  std::string kind;

  CLI::App* run = app.add_subcommand("run", "advance one configured simulation");
  run->add_option("--config", config_path, "INI-style config file");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--vtk-times", vtk_times, "times at which to dump VTK fields")
      ->delimiter(',');

  CLI::App* stab =
      app.add_subcommand("stability-map", "scheme x dt x mesh stability sweep");
  stab->add_option("--config", config_path, "base config file");
  stab->add_option("--out", out_dir, "output directory");

  CLI::App* conv =
      app.add_subcommand("convergence", "space or time convergence study");
  conv->add_option("--kind", kind, "space | time")->required();
  conv->add_option("--out", out_dir, "output directory");

  CLI::App* mass =
      app.add_subcommand("mass-compare", "area drift of both schemes, same config");
  mass->add_option("--config", config_path, "config file");
  mass->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const fsi::SimulationConfig cfg = load_config(config_path);
      fsi::RunOptions opts;
      opts.out_dir = out_dir;
      opts.vtk_times = vtk_times;
      const fsi::RunResult res = fsi::run_simulation(cfg, opts);
      std::printf("status=%s steps=%d final_energy_ratio=%.17g\n",
                  res.status.c_str(), res.steps_completed, res.final_energy_ratio);
      return res.exit_code;
    }
    if (stab->parsed()) {
      const fsi::SimulationConfig cfg = load_config(config_path);
      const std::vector<fsi::StabilityCell> cells = fsi::stability_map(cfg, out_dir);
      for (const fsi::StabilityCell& c : cells)
        std::printf(
            "%-6s dt=%-6g h_x=%-9g h_s=%-9g delta_rho=%-5g ratio=%-13.6g %s\n",
            fsi::to_string(c.scheme).c_str(), c.dt, c.h_x, c.h_s, c.delta_rho,
            c.final_ratio, c.status.c_str());
      return 0;
    }
    if (conv->parsed()) {
      if (kind == "space") {
        const fsi::ConvergenceResult res = fsi::space_convergence(
            {1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 24, 1.0 / 32}, out_dir);
        print_convergence("h", res, "err_u", "err_p");
      } else if (kind == "time") {
        const fsi::ConvergenceResult res =
            fsi::time_convergence({1e-1, 5e-2, 2e-2, 1e-2}, 1e-3, out_dir);
        print_convergence("dt", res, "err_X", "err_u");
      } else {
        throw fsi::ConfigError("convergence kind must be 'space' or 'time', got '" +
                               kind + "'");
      }
      return 0;
    }
    if (mass->parsed()) {
      fsi::SimulationConfig cfg;
      if (config_path.empty()) {
        // Default to a cell where the explicit scheme is also stable, so both
        // curves run to completion.
        cfg.dt = 0.05;
        cfg.h_s = 1.0 / 8;
      } else {
        cfg = load_config(config_path);
      }
      const fsi::MassCompareResult res = fsi::mass_compare(cfg, out_dir);
      std::printf("dlm:   status=%s drift=%.17g\n", res.status_dlm.c_str(),
                  res.drift_dlm);
      std::printf("feibm: status=%s drift=%.17g\n", res.status_feibm.c_str(),
                  res.drift_feibm);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
