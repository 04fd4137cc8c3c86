#include "fsi/output.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "fsi/errors.hpp"

namespace fsi {

const char kCsvHeader[] =
    "step,t,kinetic_fluid,kinetic_structure,elastic,total_energy,energy_ratio,"
    "energy_ineq_lhs,area,div_residual,coupling_residual,status";

namespace {

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string format_csv_row(const DiagnosticsRow& r) {
  std::ostringstream out;
  out << r.step << ',' << g17(r.t) << ',' << g17(r.kinetic_fluid) << ','
      << g17(r.kinetic_structure) << ',' << g17(r.elastic) << ','
      << g17(r.total_energy) << ',' << g17(r.energy_ratio) << ','
      << g17(r.energy_ineq_lhs) << ',' << g17(r.area) << ',' << g17(r.div_residual)
      << ',' << g17(r.coupling_residual) << ',' << r.status;
  return out.str();
}

CsvWriter::CsvWriter(const std::string& path) : out_(path) {
  if (!out_) throw std::runtime_error("cannot open CSV file '" + path + "'");
  out_ << kCsvHeader << '\n';
  out_.flush();
}

void CsvWriter::write(const DiagnosticsRow& row) {
  out_ << format_csv_row(row) << '\n';
  out_.flush();
}

std::vector<DiagnosticsRow> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open CSV file '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw std::runtime_error("CSV file '" + path + "' has an unexpected header");
  std::vector<DiagnosticsRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    size_t start = 0;
    for (size_t i = 0; i <= line.size(); ++i)
      if (i == line.size() || line[i] == ',') {
        fields.push_back(line.substr(start, i - start));
        start = i + 1;
      }
    if (fields.size() != 12)
      throw std::runtime_error("CSV file '" + path + "' has a malformed row");
    DiagnosticsRow r;
    r.step = std::stoi(fields[0]);
    r.t = std::stod(fields[1]);
    r.kinetic_fluid = std::stod(fields[2]);
    r.kinetic_structure = std::stod(fields[3]);
    r.elastic = std::stod(fields[4]);
    r.total_energy = std::stod(fields[5]);
    r.energy_ratio = std::stod(fields[6]);
    r.energy_ineq_lhs = std::stod(fields[7]);
    r.area = std::stod(fields[8]);
    r.div_residual = std::stod(fields[9]);
    r.coupling_residual = std::stod(fields[10]);
    r.status = fields[11];
    rows.push_back(std::move(r));
  }
  return rows;
}

namespace {

void vtk_header(std::ofstream& out, const std::string& title) {
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\n";
}

}  // namespace

void write_fluid_vtk(const std::string& path, const FluidMesh& mesh, const Vector& u,
                     const Vector& p) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open VTK file '" + path + "'");
  vtk_header(out, "fluid fields");
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_fine_vertices() << " double\n";
  for (const Vec2& v : mesh.fine_vertices)
    out << g17(v.x) << ' ' << g17(v.y) << " 0\n";
  const int nt = mesh.num_fine_triangles();
  out << "CELLS " << nt << ' ' << 4 * nt << '\n';
  for (const auto& tri : mesh.fine_triangles)
    out << "3 " << tri[0] << ' ' << tri[1] << ' ' << tri[2] << '\n';
  out << "CELL_TYPES " << nt << '\n';
  for (int t = 0; t < nt; ++t) out << "5\n";
  out << "POINT_DATA " << mesh.num_fine_vertices() << '\n';
  out << "VECTORS velocity double\n";
  for (int v = 0; v < mesh.num_fine_vertices(); ++v)
    out << g17(u[2 * v]) << ' ' << g17(u[2 * v + 1]) << " 0\n";
  out << "CELL_DATA " << nt << '\n';
  out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
  const int np1 = mesh.num_coarse_vertices();
  for (int t = 0; t < nt; ++t) {
    const int parent = mesh.fine_to_coarse[t];
    const auto& ft = mesh.fine_triangles[t];
    const Vec2 centroid = (1.0 / 3.0) * (mesh.fine_vertices[ft[0]] +
                                         mesh.fine_vertices[ft[1]] +
                                         mesh.fine_vertices[ft[2]]);
    const auto& ct = mesh.coarse_triangles[parent];
    const Vec2& a = mesh.coarse_vertices[ct[0]];
    const Vec2& b = mesh.coarse_vertices[ct[1]];
    const Vec2& c = mesh.coarse_vertices[ct[2]];
    const double area = signed_area(a, b, c);
    const double l0 = signed_area(centroid, b, c) / area;
    const double l1 = signed_area(a, centroid, c) / area;
    const double l2 = signed_area(a, b, centroid) / area;
    const double val =
        l0 * p[ct[0]] + l1 * p[ct[1]] + l2 * p[ct[2]] + p[np1 + parent];
    out << g17(val) << '\n';
  }
}

void write_structure_vtk(const std::string& path, const StructureMesh& s,
                         const Vector& X) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open VTK file '" + path + "'");
  vtk_header(out, "structure position");
  out << "DATASET POLYDATA\n";
  out << "POINTS " << s.num_nodes() << " double\n";
  for (int i = 0; i < s.num_nodes(); ++i)
    out << g17(X[2 * i]) << ' ' << g17(X[2 * i + 1]) << " 0\n";
  if (s.m == 1) {
    out << "LINES " << s.num_cells() << ' ' << 3 * s.num_cells() << '\n';
    for (const auto& seg : s.segments) out << "2 " << seg[0] << ' ' << seg[1] << '\n';
  } else {
    out << "POLYGONS " << s.num_cells() << ' ' << 4 * s.num_cells() << '\n';
    for (const auto& tri : s.triangles)
      out << "3 " << tri[0] << ' ' << tri[1] << ' ' << tri[2] << '\n';
  }
}

void write_manifest(const std::string& path, const SimulationConfig& cfg,
                    const std::string& status, int steps, const std::string& csv_name) {
  nlohmann::json j;
  j["version"] = version_string();
  j["status"] = status;
  j["steps"] = steps;
  j["csv"] = csv_name;
  j["config"] = config_echo(cfg);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open manifest file '" + path + "'");
  out << j.dump(2) << '\n';
}

std::string version_string() {
#ifdef FSI2D_VERSION
  return FSI2D_VERSION;
#else
  return "unknown";
#endif
}

}  // namespace fsi
