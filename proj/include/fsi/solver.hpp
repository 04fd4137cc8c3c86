#pragma once

#include <string>
#include <utility>

#include "fsi/assembly.hpp"
#include "fsi/config.hpp"
#include "fsi/fem.hpp"
#include "fsi/types.hpp"

namespace fsi {

// Matrices that do not change between time steps.
struct ConstantBlocks {
  SpMat Mf;     // fluid mass
  SpMat Kvisc;  // symmetric-gradient form, no viscosity factor
  SpMat B;      // divergence
  SpMat Ms;     // structure mass
  SpMat Ks;     // structure stiffness, no kappa factor
  SpMat Ls;     // multiplier/structure coupling
  Vector w_p1, w_p0;  // pressure gauge weights
  CouplingForm form = CouplingForm::L2;
};

ConstantBlocks precompute_blocks(const FluidMesh& mesh, const StructureMesh& s,
                                 CouplingForm form);

// Unknown ordering: velocity, pressure (P1 then P0), structure positions,
// multipliers, two pressure gauge multipliers. FE-IBM systems drop the
// structure and multiplier blocks.
struct BlockLayout {
  int n_u = 0, n_p = 0, n_s = 0;
  int off_u = 0, off_p = 0, off_x = 0, off_l = 0, off_g = 0;
  int total = 0;
};

struct BlockSystem {
  BlockLayout layout;
  SpMat A;
  Vector rhs;
};

struct SolverReport {
  std::string backend;  // "sparse_lu" or "gmres"
  double rel_residual = 0;
  int iterations = 0;
};

// Global DLM system per the semi-implicit scheme; L_f is assembled at X_lag
// (the previous time level, or the previous fixed-point iterate). Dirichlet
// velocity rows/columns are eliminated to the identity.
BlockSystem build_dlm_system(const FluidMesh& mesh, const StructureMesh& s,
                             const DofMaps& dofs, const ConstantBlocks& blocks,
                             const SimulationConfig& cfg, const Vector& u_n,
                             const Vector& X_lag, const Vector& X_n,
                             const Vector& X_prev);

// FE-IBM step-2 system (Navier-Stokes with spread force and added mass).
BlockSystem build_feibm_system(const FluidMesh& mesh, const StructureMesh& s,
                               const DofMaps& dofs, const ConstantBlocks& blocks,
                               const SimulationConfig& cfg, const Vector& u_n,
                               const Vector& X_n);

// Direct sparse LU with an iterative fallback; throws SolverError when the
// relative residual tolerance cannot be met.
std::pair<Vector, SolverReport> solve(const BlockSystem& system, double tol_lin);

void write_matrix_market(const SpMat& A, const std::string& path);

}  // namespace fsi
