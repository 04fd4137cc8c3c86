#pragma once

#include <vector>

#include "fsi/config.hpp"
#include "fsi/fem.hpp"
#include "fsi/mesh.hpp"
#include "fsi/solver.hpp"
#include "fsi/types.hpp"

namespace fsi {

// Nodal unknowns carried between time steps. Vector-valued fields are
// interleaved: (x0, y0, x1, y1, ...).
struct State {
  Vector u;       // fine-mesh P1 velocity
  Vector p;       // coarse P1 coefficients followed by P0 coefficients
  Vector X;       // structure node positions
  Vector X_prev;  // positions one step back (inertial difference quotient)
  Vector lambda;  // multipliers; stays zero for the explicit-coupling scheme
  double t = 0;
  int step = 0;
};

Vector interleave(const std::vector<Vec2>& points);

// Builds the structure discretization for the configured preset. Thick
// presets mesh the equal-area disk (radius sqrt(a*b)) or square (side
// sqrt(w*h)) as reference domain and stretch the initial positions with the
// area-preserving map diag(g, 1/g), so X^0 stores elastic energy; curve
// presets start on the target shape directly.
StructureMesh build_structure(const SimulationConfig& cfg);

class Simulation {
 public:
  explicit Simulation(const SimulationConfig& cfg);

  const SimulationConfig& config() const { return cfg_; }
  const FluidMesh& fluid_mesh() const { return mesh_; }
  const StructureMesh& structure() const { return structure_; }
  const DofMaps& dofs() const { return dofs_; }
  const ConstantBlocks& blocks() const { return blocks_; }
  const State& state() const { return state_; }
  State& state() { return state_; }

  // Advances one time step with the configured scheme; returns the report of
  // the (last) linear solve. Throws StructureEscapeError or SolverError.
  SolverReport advance();

  // Residuals recorded by the most recent fixed-point step, one per iterate.
  const std::vector<double>& fixed_point_residuals() const { return fp_residuals_; }

 private:
  struct Candidate {
    Vector u, p, X, lambda;
  };
  SolverReport solve_monolithic(const Vector& X_lag, Candidate& out) const;
  SolverReport dlm_step();
  SolverReport feibm_step();
  SolverReport fixed_point_step();
  void commit(Candidate&& c);

  SimulationConfig cfg_;
  FluidMesh mesh_;
  StructureMesh structure_;
  DofMaps dofs_;
  ConstantBlocks blocks_;
  State state_;
  std::vector<double> fp_residuals_;
};

}  // namespace fsi
