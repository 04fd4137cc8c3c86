#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "fsi/assembly.hpp"
#include "fsi/errors.hpp"
#include "fsi/schemes.hpp"
#include "oracles.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;
using fsi::CouplingForm;
using fsi::Vec2;

namespace {

double max_diff(const fsi::SpMat& prod, const MatrixXd& ref) {
  return (MatrixXd(prod) - ref).cwiseAbs().maxCoeff();
}

fsi::StructureMesh make_curve(int n_s = 12) {
  return fsi::build_structure_curve(fsi::EllipseShape{0.3, 0.15, Vec2(0.5, 0.5)}, n_s);
}

fsi::StructureMesh make_disk() {
  fsi::SimulationConfig cfg;
  cfg.preset = fsi::GeometryPreset::ellipse_codim0;
  cfg.a = 0.32;
  cfg.b = 0.18;
  cfg.h_s = 1.0 / 8;
  return fsi::build_structure(cfg);
}

// Nodal positions nudged off every mesh symmetry line, so no quadrature point
// can land exactly on an element edge.
VectorXd displaced(const fsi::StructureMesh& s) {
  VectorXd X = fsi::interleave(s.initial_positions);
  for (int i = 0; i < s.num_nodes(); ++i) {
    X[2 * i] = 0.5 + 1.02 * (X[2 * i] - 0.5) + 0.0137;
    X[2 * i + 1] = 0.5 + 1.02 * (X[2 * i + 1] - 0.5) - 0.0071;
  }
  return X;
}

VectorXd interpolate(const fsi::FluidMesh& mesh, Vec2 (*field)(const Vec2&)) {
  VectorXd u(2 * mesh.num_fine_vertices());
  for (int v = 0; v < mesh.num_fine_vertices(); ++v) {
    const Vec2 val = field(mesh.fine_vertices[v]);
    u[2 * v] = val.x;
    u[2 * v + 1] = val.y;
  }
  return u;
}

}  // namespace

TEST_CASE("fluid matrices match the dense reference assembly") {
  const fsi::FluidMesh mesh = fsi::build_unit_square_mesh(2);
  CHECK(max_diff(fsi::assemble_fluid_mass(mesh), ora::fluid_mass(mesh)) < 1e-13);
  CHECK(max_diff(fsi::assemble_viscous(mesh), ora::viscous_unit(mesh)) < 1e-13);
  CHECK(max_diff(fsi::assemble_divergence(mesh), ora::divergence(mesh)) < 1e-13);

  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  VectorXd u(2 * mesh.num_fine_vertices());
  for (int i = 0; i < u.size(); ++i) u[i] = dist(rng);
  CHECK(max_diff(fsi::assemble_transport(mesh, u, 1.3), ora::transport(mesh, u, 1.3)) <
        1e-13);
}

TEST_CASE("fluid mass integrates the constant") {
  const fsi::FluidMesh mesh = fsi::build_unit_square_mesh(3);
  const MatrixXd M = MatrixXd(fsi::assemble_fluid_mass(mesh));
  CHECK(std::abs(M.sum() - 2.0) < 1e-13);  // both components over unit area
  CHECK((M - M.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("viscous form annihilates rigid motions and pins the shear energy") {
  for (int n : {2, 4}) {
    const fsi::FluidMesh mesh = fsi::build_unit_square_mesh(n);
    const fsi::SpMat K = fsi::assemble_viscous(mesh);

    const VectorXd c = interpolate(mesh, +[](const Vec2&) { return Vec2(0.7, -0.4); });
    CHECK((K * c).cwiseAbs().maxCoeff() < 1e-13);
    const VectorXd rot =
        interpolate(mesh, +[](const Vec2& p) { return Vec2(-(p.y - 0.5), p.x - 0.5); });
    CHECK((K * rot).cwiseAbs().maxCoeff() < 1e-13);

    // Channel profile (y(1-y), 0): the symmetric-gradient energy of its nodal
    // interpolant on a structured mesh with 2n rows has the closed form
    // 1/3 - 1/(3 (2n)^2); the factor-of-two convention lives here.
    const VectorXd v =
        interpolate(mesh, +[](const Vec2& p) { return Vec2(p.y * (1 - p.y), 0.0); });
    const double expect = 1.0 / 3 - 1.0 / (3.0 * (2 * n) * (2 * n));
    CHECK(std::abs(v.dot(K * v) - expect) < 1e-13);
  }
}

TEST_CASE("transport form is skew-symmetric to the bit") {
  const fsi::FluidMesh mesh = fsi::build_unit_square_mesh(2);
  std::mt19937 rng(555);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  VectorXd u(2 * mesh.num_fine_vertices());
  for (int i = 0; i < u.size(); ++i) u[i] = dist(rng);
  const MatrixXd T = MatrixXd(fsi::assemble_transport(mesh, u, 0.9));
  for (int i = 0; i < T.rows(); ++i)
    for (int j = 0; j < T.cols(); ++j) CHECK(T(i, j) == -T(j, i));
  const MatrixXd T0 = MatrixXd(fsi::assemble_transport(mesh, VectorXd::Zero(u.size()), 0.9));
  CHECK(T0.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("divergence rows kill solenoidal fields and integrate div exactly") {
  const fsi::FluidMesh mesh = fsi::build_unit_square_mesh(3);
  const fsi::SpMat B = fsi::assemble_divergence(mesh);

  const VectorXd c = interpolate(mesh, +[](const Vec2&) { return Vec2(1.0, -2.0); });
  CHECK((B * c).cwiseAbs().maxCoeff() < 1e-14);
  const VectorXd sol = interpolate(mesh, +[](const Vec2& p) { return Vec2(p.x, -p.y); });
  CHECK((B * sol).cwiseAbs().maxCoeff() < 1e-13);

  // div (x, 0) = 1, so each row integrates to minus its gauge weight.
  fsi::Vector w1, w0;
  fsi::pressure_mean_weights(mesh, w1, w0);
  const VectorXd lin = interpolate(mesh, +[](const Vec2& p) { return Vec2(p.x, 0.0); });
  VectorXd w(w1.size() + w0.size());
  w << w1, w0;
  CHECK((B * lin + w).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("gauge weights integrate the pressure bases") {
  const fsi::FluidMesh mesh = fsi::build_unit_square_mesh(4);
  fsi::Vector w1, w0;
  fsi::pressure_mean_weights(mesh, w1, w0);
  CHECK(w1.size() == mesh.num_coarse_vertices());
  CHECK(w0.size() == mesh.num_coarse_triangles());
  CHECK(std::abs(w1.sum() - 1.0) < 1e-13);
  CHECK(std::abs(w0.sum() - 1.0) < 1e-13);
  CHECK(w1.minCoeff() > 0);
  for (int t = 0; t < w0.size(); ++t)
    CHECK(std::abs(w0[t] - mesh.coarse_triangle_area(t)) < 1e-15);
}

TEST_CASE("structure matrices match the dense reference assembly") {
  for (const fsi::StructureMesh& s : {make_curve(), make_disk()}) {
    CHECK(max_diff(fsi::assemble_structure_mass(s), ora::structure_mass(s)) < 1e-13);
    CHECK(max_diff(fsi::assemble_structure_stiffness(s), ora::structure_stiffness(s)) <
          1e-13);
    CHECK(max_diff(fsi::assemble_coupling_structure(s, CouplingForm::L2),
                   ora::coupling_structure(s, CouplingForm::L2)) < 1e-13);
    CHECK(max_diff(fsi::assemble_coupling_structure(s, CouplingForm::H1),
                   ora::coupling_structure(s, CouplingForm::H1)) < 1e-13);

    // Stiffness annihilates constants; L2 coupling is exactly the mass matrix.
    const fsi::SpMat Ks = fsi::assemble_structure_stiffness(s);
    VectorXd c(2 * s.num_nodes());
    for (int i = 0; i < s.num_nodes(); ++i) {
      c[2 * i] = 0.3;
      c[2 * i + 1] = -1.1;
    }
    CHECK((Ks * c).cwiseAbs().maxCoeff() < 1e-13);
    const MatrixXd Ms = MatrixXd(fsi::assemble_structure_mass(s));
    const MatrixXd L2 = MatrixXd(fsi::assemble_coupling_structure(s, CouplingForm::L2));
    CHECK((Ms - L2).cwiseAbs().maxCoeff() == 0.0);
    const MatrixXd H1 = MatrixXd(fsi::assemble_coupling_structure(s, CouplingForm::H1));
    CHECK((H1 - Ms - MatrixXd(Ks)).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("circle stiffness energy has the polygon closed form") {
  const double R = 0.25, kappa = 3.0;
  for (int n_s : {16, 512}) {
    const fsi::StructureMesh s =
        fsi::build_structure_curve(fsi::EllipseShape{R, R, Vec2(0.5, 0.5)}, n_s);
    const VectorXd X = fsi::interleave(s.initial_positions);
    const fsi::SpMat Ks = fsi::assemble_structure_stiffness(s);
    const double energy = 0.5 * kappa * X.dot(Ks * X);
    const double sn = std::sin(M_PI / n_s);
    const double expect = kappa * n_s * n_s * R * R * sn * sn / M_PI;
    CHECK(std::abs(energy - expect) < 1e-12 * expect);
  }
  // At n_s = 512 the polygon energy is within 0.01% of kappa pi R^2.
  const fsi::StructureMesh s =
      fsi::build_structure_curve(fsi::EllipseShape{R, R, Vec2(0.5, 0.5)}, 512);
  const VectorXd X = fsi::interleave(s.initial_positions);
  const double energy =
      0.5 * kappa * X.dot(fsi::assemble_structure_stiffness(s) * X);
  CHECK(std::abs(energy - kappa * M_PI * R * R) < 1e-4 * kappa * M_PI * R * R);
}

TEST_CASE("fluid coupling matches the dense reference assembly") {
  const fsi::FluidMesh mesh = fsi::build_unit_square_mesh(2);
  for (const fsi::StructureMesh& s : {make_curve(), make_disk()}) {
    const VectorXd X = displaced(s);
    for (CouplingForm form : {CouplingForm::L2, CouplingForm::H1}) {
      const fsi::SpMat L = fsi::assemble_coupling_fluid(mesh, s, X, form);
      CHECK(max_diff(L, ora::coupling_fluid(mesh, s, X, form)) < 1e-13);
    }
  }
}

TEST_CASE("rigid translations couple identically on both sides") {
  const fsi::FluidMesh mesh = fsi::build_unit_square_mesh(4);
  const Vec2 U(0.3, -0.2);
  const VectorXd u = interpolate(mesh, +[](const Vec2&) { return Vec2(0.3, -0.2); });
  for (const fsi::StructureMesh& s : {make_curve(), make_disk()}) {
    VectorXd Unodal(2 * s.num_nodes());
    for (int i = 0; i < s.num_nodes(); ++i) {
      Unodal[2 * i] = U.x;
      Unodal[2 * i + 1] = U.y;
    }
    const VectorXd X = fsi::interleave(s.initial_positions);
    for (CouplingForm form : {CouplingForm::L2, CouplingForm::H1}) {
      const fsi::SpMat Lf = fsi::assemble_coupling_fluid(mesh, s, X, form);
      const fsi::SpMat Ls = fsi::assemble_coupling_structure(s, form);
      CHECK((Lf * u - Ls * Unodal).cwiseAbs().maxCoeff() < 1e-13);
    }
  }
}

TEST_CASE("elastic force matches the dense reference and balances") {
  const fsi::FluidMesh mesh = fsi::build_unit_square_mesh(2);
  const double kappa = 2.7;
  for (const fsi::StructureMesh& s : {make_curve(), make_disk()}) {
    const VectorXd X = displaced(s);
    const VectorXd F = fsi::assemble_feibm_force(mesh, s, X, kappa);
    CHECK((F - ora::feibm_force(mesh, s, X, kappa)).cwiseAbs().maxCoeff() < 1e-13);
    // Partition of unity: the spread force has zero resultant.
    double fx = 0, fy = 0;
    for (int v = 0; v < mesh.num_fine_vertices(); ++v) {
      fx += F[2 * v];
      fy += F[2 * v + 1];
    }
    CHECK(std::abs(fx) < 1e-12);
    CHECK(std::abs(fy) < 1e-12);
    CHECK(fsi::assemble_feibm_force(mesh, s, X, 0.0).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("added mass matches the dense reference and is a mass matrix") {
  const fsi::FluidMesh mesh = fsi::build_unit_square_mesh(2);
  for (const fsi::StructureMesh& s : {make_curve(), make_disk()}) {
    const VectorXd X = displaced(s);
    const fsi::SpMat Mb = fsi::assemble_feibm_added_mass(mesh, s, X);
    CHECK(max_diff(Mb, ora::feibm_added_mass(mesh, s, X)) < 1e-13);
    const MatrixXd D = MatrixXd(Mb);
    // Symmetric up to the rounding of (w b_a) b_b versus (w b_b) b_a.
    CHECK((D - D.transpose()).cwiseAbs().maxCoeff() < 1e-15);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(D);
    CHECK(es.eigenvalues().minCoeff() > -1e-12);
    // Total sum integrates 1 over B in both components.
    CHECK(std::abs(D.sum() - 2.0 * s.ref_measure()) < 1e-12);
  }
}

TEST_CASE("coupling assembly reports structure escape") {
  const fsi::FluidMesh mesh = fsi::build_unit_square_mesh(2);
  const fsi::StructureMesh s = make_curve();
  VectorXd X = fsi::interleave(s.initial_positions);
  X.array() += 10.0;
  CHECK_THROWS_AS(fsi::assemble_coupling_fluid(mesh, s, X, CouplingForm::L2),
                  fsi::StructureEscapeError);
  CHECK_THROWS_AS(fsi::assemble_feibm_force(mesh, s, X, 1.0), fsi::StructureEscapeError);
  CHECK_THROWS_AS(fsi::assemble_feibm_added_mass(mesh, s, X), fsi::StructureEscapeError);
}
