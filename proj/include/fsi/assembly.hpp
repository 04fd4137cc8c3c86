#pragma once

#include "fsi/fem.hpp"
#include "fsi/mesh.hpp"
#include "fsi/types.hpp"

namespace fsi {

// Realization of the coupling forms c1, c2: plain L2 pairing on B, or the
// full H1(B) scalar product in both slots.
enum class CouplingForm { L2, H1 };

// Fluid matrices over interleaved velocity dofs (2 per fine vertex).
SpMat assemble_fluid_mass(const FluidMesh& mesh);  // (phi_j, phi_i)
// Symmetric-gradient form (Grads phi_j, Grads phi_i) with Grads v = grad v +
// (grad v)^T; multiply by the viscosity when building the system.
SpMat assemble_viscous(const FluidMesh& mesh);
// Skew-symmetrized transport (rho_f/2)[(u.grad phi_j, phi_i) - (u.grad phi_i, phi_j)].
SpMat assemble_transport(const FluidMesh& mesh, const Vector& u_prev, double rho_f);
// B_{ki} = -(div phi_i, psi_k); rows ordered P1 pressure dofs then P0.
SpMat assemble_divergence(const FluidMesh& mesh);

// Structure matrices over interleaved structure dofs (2 per node).
SpMat assemble_structure_mass(const StructureMesh& s);       // (chi_j, chi_i)_B
SpMat assemble_structure_stiffness(const StructureMesh& s);  // (Grad_s chi_j, Grad_s chi_i)_B
SpMat assemble_coupling_structure(const StructureMesh& s, CouplingForm form);  // L_s

// L_f(X): rows = multiplier dofs, cols = velocity dofs; entries c1(zeta_l, phi_j(X)).
// Throws StructureEscapeError when a mapped quadrature point leaves Omega.
SpMat assemble_coupling_fluid(const FluidMesh& mesh, const StructureMesh& s,
                              const Vector& X, CouplingForm form);

// FE-IBM force F_i = -kappa (Grad_s X, Grad_s[phi_i(X)])_B over velocity dofs.
Vector assemble_feibm_force(const FluidMesh& mesh, const StructureMesh& s,
                            const Vector& X, double kappa);
// (M_B)_{ij} = (phi_j(X), phi_i(X))_B over velocity dofs.
SpMat assemble_feibm_added_mass(const FluidMesh& mesh, const StructureMesh& s,
                                const Vector& X);

// Integrals of the pressure basis functions (gauge weights): P1 part indexed
// by coarse vertex, P0 part by coarse triangle.
void pressure_mean_weights(const FluidMesh& mesh, Vector& w_p1, Vector& w_p0);

}  // namespace fsi
