#pragma once

#include <array>
#include <optional>
#include <variant>
#include <vector>

#include "fsi/geometry.hpp"

namespace fsi {

// Structured triangulation of the unit square, stored twice: the coarse mesh
// carries the pressure spaces, its uniform red refinement carries the velocity
// space. Each cell is split along one diagonal (fine cells inherit the parent
// orientation), so the fine mesh is itself a structured mesh with 2n
// subdivisions and point location stays O(1).
struct FluidMesh {
  int n = 0;        // coarse subdivisions per side
  double h_x = 0;   // coarse mesh size, 1/n

  std::vector<Vec2> coarse_vertices;
  std::vector<std::array<int, 3>> coarse_triangles;
  std::vector<Vec2> fine_vertices;
  std::vector<std::array<int, 3>> fine_triangles;
  std::vector<std::array<int, 4>> coarse_to_fine;  // 4 children per coarse triangle
  std::vector<int> fine_to_coarse;

  int num_coarse_vertices() const { return static_cast<int>(coarse_vertices.size()); }
  int num_coarse_triangles() const { return static_cast<int>(coarse_triangles.size()); }
  int num_fine_vertices() const { return static_cast<int>(fine_vertices.size()); }
  int num_fine_triangles() const { return static_cast<int>(fine_triangles.size()); }

  bool fine_vertex_on_boundary(int v) const;
  double coarse_triangle_area(int t) const;
  double fine_triangle_area(int t) const;
  static double diameter() { return std::sqrt(2.0); }
};

struct PointLocation {
  int triangle = -1;             // fine triangle index
  std::array<double, 3> bary{};  // barycentric coordinates, sum to 1
};

FluidMesh build_unit_square_mesh(int n);

// Lowest-index containing fine triangle, or nullopt when the point lies
// outside the closed unit square by more than eps_geo.
std::optional<PointLocation> locate_point(const FluidMesh& mesh, const Vec2& p);

struct EllipseShape {
  double a = 0;  // semi-axis along x
  double b = 0;  // semi-axis along y
  Vec2 center{0.5, 0.5};
};

struct RectangleShape {
  double w = 0;
  double h = 0;
  Vec2 center{0.5, 0.5};
};

using StructureShape = std::variant<EllipseShape, RectangleShape>;

// Discretization of the structure reference domain B. Curves (m=1) keep their
// scalar parameter per node; areas (m=2) keep 2D reference coordinates.
struct StructureMesh {
  int m = 1;  // intrinsic dimension of B
  bool closed = false;
  double h_s = 0;  // parameter interval (m=1) or target mesh size (m=2)

  std::vector<double> ref_params;            // m=1, size = node count
  std::vector<std::array<int, 2>> segments;  // m=1
  std::vector<double> segment_lengths;       // m=1, parameter length per cell

  std::vector<Vec2> ref_points;               // m=2
  std::vector<std::array<int, 3>> triangles;  // m=2

  std::vector<Vec2> initial_positions;  // X^0 nodal values

  int num_nodes() const {
    return static_cast<int>(m == 1 ? ref_params.size() : ref_points.size());
  }
  int num_cells() const {
    return static_cast<int>(m == 1 ? segments.size() : triangles.size());
  }
  double ref_triangle_area(int c) const;
  double ref_measure() const;  // total parameter length or reference area
};

StructureMesh build_structure_curve(const StructureShape& shape, int n_s);
StructureMesh build_structure_area(const StructureShape& shape, double h_s);

}  // namespace fsi
