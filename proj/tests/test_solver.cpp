#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fsi/diagnostics.hpp"
#include "fsi/errors.hpp"
#include "fsi/schemes.hpp"
#include "fsi/solver.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;
using fsi::Vec2;

namespace {

struct Fixture {
  fsi::SimulationConfig cfg;
  fsi::FluidMesh mesh;
  fsi::StructureMesh s;
  fsi::DofMaps dofs;
  fsi::ConstantBlocks blocks;
  fsi::Vector u0, X0;

  Fixture() {
    cfg.h_x = 0.25;
    cfg.h_s = 0.25;
    cfg.dt = 0.1;
    cfg.nu = 1.0;
    cfg.kappa = 5.0;
    cfg.delta_rho = 0.3;
    mesh = fsi::build_unit_square_mesh(4);
    s = fsi::build_structure(cfg);
    dofs = fsi::build_dof_maps(mesh, s);
    blocks = fsi::precompute_blocks(mesh, s, cfg.coupling_form);
    u0 = fsi::Vector::Zero(dofs.n_velocity);
    X0 = fsi::interleave(s.initial_positions);
  }

  fsi::BlockSystem dlm() const {
    return fsi::build_dlm_system(mesh, s, dofs, blocks, cfg, u0, X0, X0, X0);
  }
};

double backward_error(const fsi::SpMat& A, const fsi::Vector& b, const fsi::Vector& z) {
  double a_norm1 = 0;
  for (int col = 0; col < A.outerSize(); ++col) {
    double sum = 0;
    for (fsi::SpMat::InnerIterator it(A, col); it; ++it) sum += std::abs(it.value());
    a_norm1 = std::max(a_norm1, sum);
  }
  return (A * z - b).norm() / (a_norm1 * z.norm() + b.norm());
}

}  // namespace

TEST_CASE("coupled system layout and symmetry structure") {
  const Fixture f;
  const fsi::BlockSystem sys = f.dlm();
  const fsi::BlockLayout& l = sys.layout;
  CHECK(l.n_u == 162);
  CHECK(l.n_p == 57);
  CHECK(l.n_s == 50);
  CHECK(l.off_u == 0);
  CHECK(l.off_p == l.n_u);
  CHECK(l.off_x == l.off_p + l.n_p);
  CHECK(l.off_l == l.off_x + l.n_s);
  CHECK(l.off_g == l.off_l + l.n_s);
  CHECK(l.total == l.off_g + 2);
  CHECK(sys.A.rows() == l.total);
  CHECK(sys.A.cols() == l.total);
  CHECK(sys.rhs.size() == l.total);

  const MatrixXd D = MatrixXd(sys.A);

  // The multiplier rows carry dt times the transpose of the velocity-row
  // coupling block, exactly.
  const MatrixXd upper = D.block(l.off_u, l.off_l, l.n_u, l.n_s);
  const MatrixXd lower = D.block(l.off_l, l.off_u, l.n_s, l.n_u);
  CHECK((lower - f.cfg.dt * upper.transpose()).cwiseAbs().maxCoeff() == 0.0);

  // Pressure gauge rows/columns hold the basis integrals symmetrically.
  const int np1 = static_cast<int>(f.blocks.w_p1.size());
  for (int k = 0; k < l.n_p; ++k) {
    const double w =
        k < np1 ? f.blocks.w_p1[k] : f.blocks.w_p0[k - np1];
    const int row = k < np1 ? l.off_g : l.off_g + 1;
    CHECK(D(row, l.off_p + k) == w);
    CHECK(D(l.off_p + k, row) == w);
    CHECK(D(row == l.off_g ? l.off_g + 1 : l.off_g, l.off_p + k) == 0.0);
  }

  // Constrained velocity dofs reduce to identity rows with zero data and
  // symmetrically emptied columns.
  for (int d : f.dofs.dirichlet_velocity) {
    CHECK(sys.rhs[l.off_u + d] == 0.0);
    VectorXd unit = VectorXd::Zero(l.total);
    unit[l.off_u + d] = 1.0;
    CHECK((D.row(l.off_u + d).transpose() - unit).cwiseAbs().maxCoeff() == 0.0);
    CHECK((D.col(l.off_u + d) - unit).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("direct solver meets the backward-error tolerance") {
  const Fixture f;
  const fsi::BlockSystem sys = f.dlm();
  const auto [z, report] = fsi::solve(sys, f.cfg.tol_lin);
  CHECK(report.backend == "sparse_lu");
  CHECK(report.rel_residual <= f.cfg.tol_lin);
  CHECK(backward_error(sys.A, sys.rhs, z) <= f.cfg.tol_lin);

  // Dense full-pivot factorization agrees with the sparse solution.
  const MatrixXd D = MatrixXd(sys.A);
  const VectorXd zd = Eigen::FullPivLU<MatrixXd>(D).solve(sys.rhs);
  CHECK((z - zd).norm() <= 1e-6 * zd.norm());

  // The velocity block of the solution is discretely divergence free.
  CHECK(fsi::div_residual(f.blocks, z.segment(sys.layout.off_u, sys.layout.n_u)) < 1e-9);

  // Pressure gauges hold: both partial means vanish.
  const VectorXd p = z.segment(sys.layout.off_p, sys.layout.n_p);
  const int np1 = static_cast<int>(f.blocks.w_p1.size());
  CHECK(std::abs(f.blocks.w_p1.dot(p.head(np1))) < 1e-8);
  CHECK(std::abs(f.blocks.w_p0.dot(p.tail(sys.layout.n_p - np1))) < 1e-8);
}

TEST_CASE("coupled matrix is uniformly invertible after gauging") {
  const Fixture f;
  const fsi::BlockSystem sys = f.dlm();
  Eigen::BDCSVD<MatrixXd> svd(MatrixXd(sys.A));
  CHECK(svd.singularValues().minCoeff() > 1e-7);
}

TEST_CASE("explicit-coupling system solves and stays divergence free") {
  Fixture f;
  f.cfg.scheme = fsi::Scheme::feibm;
  const fsi::BlockSystem sys = fsi::build_feibm_system(f.mesh, f.s, f.dofs, f.blocks,
                                                       f.cfg, f.u0, f.X0);
  const fsi::BlockLayout& l = sys.layout;
  CHECK(l.n_u == 162);
  CHECK(l.n_p == 57);
  CHECK(l.total == l.n_u + l.n_p + 2);
  const auto [z, report] = fsi::solve(sys, f.cfg.tol_lin);
  CHECK(report.rel_residual <= f.cfg.tol_lin);
  CHECK(fsi::div_residual(f.blocks, z.segment(l.off_u, l.n_u)) < 1e-9);
}

TEST_CASE("solver failure raises an error") {
  // A zero matrix with a nonzero right-hand side has backward error 1 for
  // every candidate solution, so both backends must give up.
  fsi::BlockSystem sys;
  sys.A = fsi::SpMat(2, 2);
  sys.rhs = fsi::Vector(2);
  sys.rhs << 1.0, 1.0;
  sys.layout.total = 2;
  CHECK_THROWS_AS(fsi::solve(sys, 1e-10), fsi::SolverError);
}

TEST_CASE("matrix market export round-trips") {
  fsi::SpMat A(3, 3);
  std::vector<fsi::Triplet> trips{{0, 0, 1.5}, {1, 2, -2.25}, {2, 1, 3.0}};
  A.setFromTriplets(trips.begin(), trips.end());
  const std::string path = "mm_test.mtx";
  fsi::write_matrix_market(A, path);

  std::ifstream in(path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header.find("%%MatrixMarket") == 0);
  CHECK(header.find("coordinate") != std::string::npos);
  int rows = 0, cols = 0, nnz = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::istringstream(line) >> rows >> cols >> nnz;
  CHECK(rows == 3);
  CHECK(cols == 3);
  CHECK(nnz == 3);
  fsi::SpMat back(rows, cols);
  std::vector<fsi::Triplet> read;
  for (int k = 0; k < nnz; ++k) {
    int i = 0, j = 0;
    double v = 0;
    in >> i >> j >> v;
    read.emplace_back(i - 1, j - 1, v);
  }
  back.setFromTriplets(read.begin(), read.end());
  CHECK((MatrixXd(back) - MatrixXd(A)).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());
}
