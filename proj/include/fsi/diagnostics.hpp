#pragma once

#include <utility>
#include <vector>

#include "fsi/config.hpp"
#include "fsi/solver.hpp"
#include "fsi/types.hpp"

namespace fsi {

struct EnergyBreakdown {
  double kinetic_fluid = 0;
  double kinetic_structure = 0;
  double elastic = 0;
  double total() const { return kinetic_fluid + kinetic_structure + elastic; }
};

// Pi = (rho_f/2)||u||^2 + (delta_rho/2)||(X - X_prev)/dt||^2_B + E(X),
// with E(X) = (1/2) X^T (kappa K_s) X.
EnergyBreakdown total_energy(const ConstantBlocks& blocks, const SimulationConfig& cfg,
                             const Vector& u, const Vector& X, const Vector& X_prev);

// Left-hand side of the discrete energy inequality for one step; the DLM
// scheme keeps this <= 1e-8 * max(1, Pi^n) for every step.
double energy_inequality_lhs(const ConstantBlocks& blocks, const SimulationConfig& cfg,
                             const Vector& u_new, const Vector& u_old,
                             const Vector& X_new, const Vector& X_old,
                             const Vector& X_prev_old);

double energy_tolerance(double total_energy_old);

// Shoelace area of the node loop (m=1) or summed current triangle areas (m=2).
double enclosed_area(const StructureMesh& s, const Vector& X);

double div_residual(const ConstantBlocks& blocks, const Vector& u);  // ||B u||_2

// r = ||L_f(X_new) u - (L_s X_new - L_s X_old)/dt||_{0,B}, measured with the
// lumped structure mass matrix.
double coupling_residual(const FluidMesh& mesh, const StructureMesh& s,
                         const ConstantBlocks& blocks, const SimulationConfig& cfg,
                         const Vector& u, const Vector& X_new, const Vector& X_old);

// Mean interior minus mean exterior pressure; coarse elements are classified
// by the winding of their corners/centroid against the node loop, and crossed
// elements are excluded from both means.
double pressure_jump(const FluidMesh& mesh, const StructureMesh& s, const Vector& p,
                     const Vector& X);

// Force-balance prediction for the jump across a near-circular closed curve:
// kappa * avg(|dX/ds|^2) / R^2 with R the mean nodal radius.
double force_balance_jump(const StructureMesh& s, const Vector& X, double kappa);

double velocity_l2(const ConstantBlocks& blocks, const Vector& u);
double structure_l2(const ConstantBlocks& blocks, const Vector& X);

// L2 distance between p_h (P1+P0 coefficients) and the piecewise-constant
// field jump*(indicator of the disk) shifted to zero mean; crossed elements
// are integrated by recursive subdivision.
double pressure_l2_error_circle(const FluidMesh& mesh, const Vector& p,
                                const Vec2& center, double R, double jump);

double fit_rate(double e_coarse, double e_fine, double h_coarse, double h_fine);
// Per-interval rates for a (h, error) sequence ordered coarse to fine.
std::vector<double> fit_rates(const std::vector<std::pair<double, double>>& errors);

}  // namespace fsi
