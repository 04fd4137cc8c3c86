#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "fsi/config.hpp"
#include "fsi/mesh.hpp"
#include "fsi/types.hpp"

namespace fsi {

// One CSV line of per-step diagnostics. Every row of a healthy run carries
// status "ok"; the last row of a run carries the terminal status instead
// (completed, energy_blowup_detected, structure_escape, solver_failure).
struct DiagnosticsRow {
  int step = 0;
  double t = 0;
  double kinetic_fluid = 0;
  double kinetic_structure = 0;
  double elastic = 0;
  double total_energy = 0;
  double energy_ratio = 0;
  double energy_ineq_lhs = 0;
  double area = 0;
  double div_residual = 0;
  double coupling_residual = 0;
  std::string status = "ok";
};

// Bit-exact CSV schema shared by writer, reader, and tests.
extern const char kCsvHeader[];

std::string format_csv_row(const DiagnosticsRow& row);

// Streams rows as they are produced and flushes each line, so aborted runs
// leave a readable partial file behind.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  void write(const DiagnosticsRow& row);

 private:
  std::ofstream out_;
};

std::vector<DiagnosticsRow> read_csv(const std::string& path);

// Legacy ASCII VTK dumps: fluid fields on the fine mesh (point velocity,
// cell pressure), structure as polydata lines or triangles.
void write_fluid_vtk(const std::string& path, const FluidMesh& mesh, const Vector& u,
                     const Vector& p);
void write_structure_vtk(const std::string& path, const StructureMesh& s,
                         const Vector& X);

void write_manifest(const std::string& path, const SimulationConfig& cfg,
                    const std::string& status, int steps, const std::string& csv_name);

std::string version_string();

}  // namespace fsi
