// Dense brute-force reference assemblers, written independently of the sparse
// production code: exact barycentric-product integrals where the integrand is
// polynomial, explicit symmetric-gradient tensor contractions, and a linear
// scan over all fine triangles for point location. Shared by the assembly unit
// tests and the acceptance suite.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fsi/config.hpp"
#include "fsi/mesh.hpp"

namespace ora {

using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

inline double tri_area(const fsi::Vec2& a, const fsi::Vec2& b, const fsi::Vec2& c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

// Gradients of the three P1 hat functions on a triangle.
inline std::array<Vector2d, 3> hat_gradients(const fsi::Vec2& a, const fsi::Vec2& b,
                                             const fsi::Vec2& c) {
  const double det = 2.0 * tri_area(a, b, c);
  return {Vector2d(b.y - c.y, c.x - b.x) / det, Vector2d(c.y - a.y, a.x - c.x) / det,
          Vector2d(a.y - b.y, b.x - a.x) / det};
}

// Exact integral of lambda_a * lambda_b over a triangle of the given area.
inline double int_lambda2(double area, int a, int b) {
  return area * (a == b ? 1.0 / 6 : 1.0 / 12);
}

struct Located {
  int triangle = -1;
  std::array<double, 3> bary{};
};

// First (lowest-index) fine triangle containing p, by linear scan.
inline Located brute_locate(const fsi::FluidMesh& mesh, const fsi::Vec2& p) {
  const double eps = 1e-12 * fsi::FluidMesh::diameter();
  for (int t = 0; t < mesh.num_fine_triangles(); ++t) {
    const auto& tri = mesh.fine_triangles[t];
    const fsi::Vec2& a = mesh.fine_vertices[tri[0]];
    const fsi::Vec2& b = mesh.fine_vertices[tri[1]];
    const fsi::Vec2& c = mesh.fine_vertices[tri[2]];
    const double area = tri_area(a, b, c);
    const double l0 = tri_area(p, b, c) / area;
    const double l1 = tri_area(a, p, c) / area;
    const double l2 = tri_area(a, b, p) / area;
    if (l0 >= -eps && l1 >= -eps && l2 >= -eps) return {t, {l0, l1, l2}};
  }
  throw std::runtime_error("brute_locate: point outside the unit square");
}

// One quadrature point on the structure reference domain.
struct SPoint {
  double weight = 0;
  int nn = 0;
  std::array<int, 3> nodes{};
  std::array<double, 3> shape{};
  std::array<Vector2d, 3> grad{};
};

// Degree-5 rules transcribed from standard tables: 3-point Gauss-Legendre per
// curve segment, 7-point rule per reference triangle.
inline std::vector<SPoint> struct_points(const fsi::StructureMesh& s) {
  std::vector<SPoint> pts;
  if (s.m == 1) {
    const double r = std::sqrt(0.6);
    const double gx[3] = {0.5 * (1 - r), 0.5, 0.5 * (1 + r)};
    const double gw[3] = {5.0 / 18, 8.0 / 18, 5.0 / 18};
    for (int c = 0; c < s.num_cells(); ++c) {
      const double len = s.segment_lengths[c];
      for (int q = 0; q < 3; ++q) {
        SPoint p;
        p.weight = gw[q] * len;
        p.nn = 2;
        p.nodes = {s.segments[c][0], s.segments[c][1], 0};
        p.shape = {1.0 - gx[q], gx[q], 0.0};
        p.grad = {Vector2d(-1.0 / len, 0), Vector2d(1.0 / len, 0), Vector2d(0, 0)};
        pts.push_back(p);
      }
    }
  } else {
    const double w0 = 0.225;
    const double w1 = 0.132394152788506, a1 = 0.470142064105115;
    const double w2 = 0.125939180544827, a2 = 0.101286507323456;
    const double bary[7][3] = {
        {1.0 / 3, 1.0 / 3, 1.0 / 3},     {a1, a1, 1 - 2 * a1}, {a1, 1 - 2 * a1, a1},
        {1 - 2 * a1, a1, a1},            {a2, a2, 1 - 2 * a2}, {a2, 1 - 2 * a2, a2},
        {1 - 2 * a2, a2, a2}};
    const double w[7] = {w0, w1, w1, w1, w2, w2, w2};
    for (int c = 0; c < s.num_cells(); ++c) {
      const auto& tri = s.triangles[c];
      const double area = tri_area(s.ref_points[tri[0]], s.ref_points[tri[1]],
                                   s.ref_points[tri[2]]);
      const auto g = hat_gradients(s.ref_points[tri[0]], s.ref_points[tri[1]],
                                   s.ref_points[tri[2]]);
      for (int q = 0; q < 7; ++q) {
        SPoint p;
        p.weight = w[q] * area;
        p.nn = 3;
        p.nodes = {tri[0], tri[1], tri[2]};
        p.shape = {bary[q][0], bary[q][1], bary[q][2]};
        p.grad = g;
        pts.push_back(p);
      }
    }
  }
  return pts;
}

inline fsi::Vec2 map_point(const SPoint& p, const VectorXd& X) {
  fsi::Vec2 pos(0, 0);
  for (int l = 0; l < p.nn; ++l) {
    pos.x += p.shape[l] * X[2 * p.nodes[l]];
    pos.y += p.shape[l] * X[2 * p.nodes[l] + 1];
  }
  return pos;
}

// Columns of the deformation gradient dX/ds at a structure quadrature point.
inline std::array<Vector2d, 2> def_columns(const SPoint& p, const VectorXd& X) {
  std::array<Vector2d, 2> cols = {Vector2d::Zero(), Vector2d::Zero()};
  for (int l = 0; l < p.nn; ++l)
    for (int j = 0; j < 2; ++j) {
      cols[j].x() += p.grad[l][j] * X[2 * p.nodes[l]];
      cols[j].y() += p.grad[l][j] * X[2 * p.nodes[l] + 1];
    }
  return cols;
}

inline double fine_area(const fsi::FluidMesh& mesh, int t) {
  const auto& tri = mesh.fine_triangles[t];
  return tri_area(mesh.fine_vertices[tri[0]], mesh.fine_vertices[tri[1]],
                  mesh.fine_vertices[tri[2]]);
}

inline MatrixXd fluid_mass(const fsi::FluidMesh& mesh) {
  const int n = 2 * mesh.num_fine_vertices();
  MatrixXd M = MatrixXd::Zero(n, n);
  for (int t = 0; t < mesh.num_fine_triangles(); ++t) {
    const auto& tri = mesh.fine_triangles[t];
    const double area = fine_area(mesh, t);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int k = 0; k < 2; ++k)
          M(2 * tri[a] + k, 2 * tri[b] + k) += int_lambda2(area, a, b);
  }
  return M;
}

// Unit-viscosity block: (1/2) (Grads phi_b e_c, Grads phi_a e_k) with
// Grads v = Grad v + (Grad v)^T, contracted from explicit 2x2 matrices.
inline MatrixXd viscous_unit(const fsi::FluidMesh& mesh) {
  const int n = 2 * mesh.num_fine_vertices();
  MatrixXd K = MatrixXd::Zero(n, n);
  for (int t = 0; t < mesh.num_fine_triangles(); ++t) {
    const auto& tri = mesh.fine_triangles[t];
    const double area = fine_area(mesh, t);
    const auto g = hat_gradients(mesh.fine_vertices[tri[0]], mesh.fine_vertices[tri[1]],
                                 mesh.fine_vertices[tri[2]]);
    for (int a = 0; a < 3; ++a)
      for (int k = 0; k < 2; ++k)
        for (int b = 0; b < 3; ++b)
          for (int c = 0; c < 2; ++c) {
            Eigen::Matrix2d gu = Eigen::Matrix2d::Zero(), gv = Eigen::Matrix2d::Zero();
            gu.row(c) = g[b].transpose();
            gv.row(k) = g[a].transpose();
            const Eigen::Matrix2d su = gu + gu.transpose(), sv = gv + gv.transpose();
            K(2 * tri[a] + k, 2 * tri[b] + c) += 0.5 * area * (su.array() * sv.array()).sum();
          }
  }
  return K;
}

// Skew transport block (rho/2)[(u.Grad phi_b, phi_a) - (u.Grad phi_a, phi_b)],
// with the P1xP1 products integrated exactly.
inline MatrixXd transport(const fsi::FluidMesh& mesh, const VectorXd& u, double rho_f) {
  const int n = 2 * mesh.num_fine_vertices();
  MatrixXd T = MatrixXd::Zero(n, n);
  for (int t = 0; t < mesh.num_fine_triangles(); ++t) {
    const auto& tri = mesh.fine_triangles[t];
    const double area = fine_area(mesh, t);
    const auto g = hat_gradients(mesh.fine_vertices[tri[0]], mesh.fine_vertices[tri[1]],
                                 mesh.fine_vertices[tri[2]]);
    double P[3][3];  // P[a][b] = int (u . grad lambda_a) lambda_b
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        double v = 0;
        for (int c = 0; c < 3; ++c) {
          const Vector2d uc(u[2 * tri[c]], u[2 * tri[c] + 1]);
          v += uc.dot(g[a]) * int_lambda2(area, c, b);
        }
        P[a][b] = v;
      }
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const double val = 0.5 * rho_f * (P[b][a] - P[a][b]);
        for (int k = 0; k < 2; ++k) T(2 * tri[a] + k, 2 * tri[b] + k) += val;
      }
  }
  return T;
}

// Divergence block B with rows ordered P1 coarse vertices then P0 coarse
// triangles: B(r, i) = -(div phi_i, psi_r).
inline MatrixXd divergence(const fsi::FluidMesh& mesh) {
  const int np = mesh.num_coarse_vertices() + mesh.num_coarse_triangles();
  const int nu = 2 * mesh.num_fine_vertices();
  MatrixXd B = MatrixXd::Zero(np, nu);
  for (int t = 0; t < mesh.num_fine_triangles(); ++t) {
    const auto& tri = mesh.fine_triangles[t];
    const double area = fine_area(mesh, t);
    const auto g = hat_gradients(mesh.fine_vertices[tri[0]], mesh.fine_vertices[tri[1]],
                                 mesh.fine_vertices[tri[2]]);
    const int parent = mesh.fine_to_coarse[t];
    const auto& ct = mesh.coarse_triangles[parent];
    const fsi::Vec2 centroid((mesh.fine_vertices[tri[0]].x + mesh.fine_vertices[tri[1]].x +
                              mesh.fine_vertices[tri[2]].x) /
                                 3.0,
                             (mesh.fine_vertices[tri[0]].y + mesh.fine_vertices[tri[1]].y +
                              mesh.fine_vertices[tri[2]].y) /
                                 3.0);
    const fsi::Vec2& A = mesh.coarse_vertices[ct[0]];
    const fsi::Vec2& Bv = mesh.coarse_vertices[ct[1]];
    const fsi::Vec2& C = mesh.coarse_vertices[ct[2]];
    const double carea = tri_area(A, Bv, C);
    const double psi[3] = {tri_area(centroid, Bv, C) / carea,
                           tri_area(A, centroid, C) / carea,
                           tri_area(A, Bv, centroid) / carea};
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 2; ++c) {
        const double div = g[b][c];
        for (int r = 0; r < 3; ++r)
          B(ct[r], 2 * tri[b] + c) -= psi[r] * area * div;
        B(mesh.num_coarse_vertices() + parent, 2 * tri[b] + c) -= area * div;
      }
  }
  return B;
}

// Scalar structure form expanded to both components: mass and/or stiffness.
inline MatrixXd structure_form(const fsi::StructureMesh& s, bool mass, bool stiffness) {
  const int n = 2 * s.num_nodes();
  MatrixXd M = MatrixXd::Zero(n, n);
  if (s.m == 1) {
    for (int c = 0; c < s.num_cells(); ++c) {
      const double h = s.segment_lengths[c];
      const int i = s.segments[c][0], j = s.segments[c][1];
      const int id[2] = {i, j};
      const double mloc[2][2] = {{h / 3, h / 6}, {h / 6, h / 3}};
      const double kloc[2][2] = {{1 / h, -1 / h}, {-1 / h, 1 / h}};
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          double v = 0;
          if (mass) v += mloc[a][b];
          if (stiffness) v += kloc[a][b];
          for (int k = 0; k < 2; ++k) M(2 * id[a] + k, 2 * id[b] + k) += v;
        }
    }
  } else {
    for (int c = 0; c < s.num_cells(); ++c) {
      const auto& tri = s.triangles[c];
      const double area = tri_area(s.ref_points[tri[0]], s.ref_points[tri[1]],
                                   s.ref_points[tri[2]]);
      const auto g = hat_gradients(s.ref_points[tri[0]], s.ref_points[tri[1]],
                                   s.ref_points[tri[2]]);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          double v = 0;
          if (mass) v += int_lambda2(area, a, b);
          if (stiffness) v += area * g[a].dot(g[b]);
          for (int k = 0; k < 2; ++k) M(2 * tri[a] + k, 2 * tri[b] + k) += v;
        }
    }
  }
  return M;
}

inline MatrixXd structure_mass(const fsi::StructureMesh& s) {
  return structure_form(s, true, false);
}

inline MatrixXd structure_stiffness(const fsi::StructureMesh& s) {
  return structure_form(s, false, true);
}

inline MatrixXd coupling_structure(const fsi::StructureMesh& s, fsi::CouplingForm form) {
  return structure_form(s, true, form == fsi::CouplingForm::H1);
}

inline MatrixXd coupling_fluid(const fsi::FluidMesh& mesh, const fsi::StructureMesh& s,
                               const VectorXd& X, fsi::CouplingForm form) {
  const int nr = 2 * s.num_nodes();
  const int nc = 2 * mesh.num_fine_vertices();
  MatrixXd L = MatrixXd::Zero(nr, nc);
  for (const SPoint& p : struct_points(s)) {
    const Located loc = brute_locate(mesh, map_point(p, X));
    const auto& ftri = mesh.fine_triangles[loc.triangle];
    const auto fg = hat_gradients(mesh.fine_vertices[ftri[0]], mesh.fine_vertices[ftri[1]],
                                  mesh.fine_vertices[ftri[2]]);
    const auto cols = def_columns(p, X);
    for (int l = 0; l < p.nn; ++l)
      for (int a = 0; a < 3; ++a) {
        double val = p.weight * p.shape[l] * loc.bary[a];
        if (form == fsi::CouplingForm::H1)
          for (int j = 0; j < s.m; ++j) val += p.weight * p.grad[l][j] * fg[a].dot(cols[j]);
        for (int k = 0; k < 2; ++k) L(2 * p.nodes[l] + k, 2 * ftri[a] + k) += val;
      }
  }
  return L;
}

inline VectorXd feibm_force(const fsi::FluidMesh& mesh, const fsi::StructureMesh& s,
                            const VectorXd& X, double kappa) {
  VectorXd F = VectorXd::Zero(2 * mesh.num_fine_vertices());
  for (const SPoint& p : struct_points(s)) {
    const Located loc = brute_locate(mesh, map_point(p, X));
    const auto& ftri = mesh.fine_triangles[loc.triangle];
    const auto fg = hat_gradients(mesh.fine_vertices[ftri[0]], mesh.fine_vertices[ftri[1]],
                                  mesh.fine_vertices[ftri[2]]);
    const auto cols = def_columns(p, X);
    for (int a = 0; a < 3; ++a)
      for (int k = 0; k < 2; ++k) {
        double val = 0;
        for (int j = 0; j < s.m; ++j) val += cols[j][k] * fg[a].dot(cols[j]);
        F[2 * ftri[a] + k] -= kappa * p.weight * val;
      }
  }
  return F;
}

inline MatrixXd feibm_added_mass(const fsi::FluidMesh& mesh, const fsi::StructureMesh& s,
                                 const VectorXd& X) {
  const int n = 2 * mesh.num_fine_vertices();
  MatrixXd M = MatrixXd::Zero(n, n);
  for (const SPoint& p : struct_points(s)) {
    const Located loc = brute_locate(mesh, map_point(p, X));
    const auto& ftri = mesh.fine_triangles[loc.triangle];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int k = 0; k < 2; ++k)
          M(2 * ftri[a] + k, 2 * ftri[b] + k) += p.weight * loc.bary[a] * loc.bary[b];
  }
  return M;
}

}  // namespace ora
