#pragma once

#include <array>
#include <vector>

#include "fsi/mesh.hpp"
#include "fsi/types.hpp"

namespace fsi {

// Quadrature on the reference triangle (0,0)-(1,0)-(0,1) or the reference
// segment [0,1]. Weights are positive and sum to the reference measure.
struct QuadratureRule {
  std::vector<Vec2> points;  // segment rules use only .x
  std::vector<double> weights;
  int degree = 0;  // declared exactness
};

QuadratureRule triangle_rule(int degree);  // degrees 1..5
QuadratureRule segment_rule(int degree);   // degrees 1..9

// P1 nodal values on a triangle are the barycentric coordinates themselves;
// these helpers supply the remaining element data.
std::array<double, 3> p1_triangle_values(const Vec2& ref);
std::array<Vec2, 3> p1_triangle_ref_gradients();
// Gradients of the three P1 hat functions on a physical triangle.
std::array<Vec2, 3> p1_gradients(const Vec2& a, const Vec2& b, const Vec2& c);
std::array<double, 2> p1_segment_values(double ref);

// Velocity boundary treatment per edge of the unit square. Walls constrain
// both components; symmetry edges constrain only the normal component.
enum class EdgeBc { wall, symmetry };

struct BcSpec {
  EdgeBc left = EdgeBc::wall;
  EdgeBc right = EdgeBc::wall;
  EdgeBc bottom = EdgeBc::wall;
  EdgeBc top = EdgeBc::wall;
};

// Dof layout for the coupled system. Velocity components interleave
// (dof = 2*vertex + component) on the fine mesh; pressure stacks the P1
// coefficients (coarse vertices) before the P0 ones (coarse triangles);
// structure and multiplier fields interleave like velocity.
struct DofMaps {
  int n_velocity = 0;
  int n_pressure_p1 = 0;
  int n_pressure_p0 = 0;
  int n_structure = 0;

  std::vector<int> dirichlet_velocity;  // constrained velocity dofs, ascending
  std::vector<char> velocity_constrained;

  int n_pressure() const { return n_pressure_p1 + n_pressure_p0; }
  int n_multiplier() const { return n_structure; }
};

DofMaps build_dof_maps(const FluidMesh& mesh, const StructureMesh& structure,
                       const BcSpec& bc = BcSpec{});

// P1 interpolation of an interleaved velocity vector at a located point.
Vec2 eval_velocity(const FluidMesh& mesh, const Vector& u, const PointLocation& loc);

}  // namespace fsi
