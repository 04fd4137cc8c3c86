#include "fsi/assembly.hpp"

#include <stdexcept>
#include <vector>

#include "fsi/errors.hpp"

namespace fsi {

namespace {

constexpr int kFluidQuadDegree = 4;
constexpr int kStructureQuadDegree = 5;

// Precomputed reference data at one structure quadrature point. For m=1 the
// gradient is the scalar d/ds stored in grad[a].x; for m=2 it is the full
// reference-plane gradient.
struct StructQP {
  double weight = 0;  // quadrature weight times cell measure
  int nn = 0;
  int nodes[3] = {-1, -1, -1};
  double shape[3] = {0, 0, 0};
  Vec2 grad[3];
};

std::vector<StructQP> structure_quadrature(const StructureMesh& s) {
  std::vector<StructQP> qps;
  if (s.m == 1) {
    const QuadratureRule rule = segment_rule(kStructureQuadDegree);
    qps.reserve(s.segments.size() * rule.points.size());
    for (int c = 0; c < s.num_cells(); ++c) {
      const double len = s.segment_lengths[c];
      for (size_t q = 0; q < rule.points.size(); ++q) {
        StructQP qp;
        qp.weight = rule.weights[q] * len;
        qp.nn = 2;
        qp.nodes[0] = s.segments[c][0];
        qp.nodes[1] = s.segments[c][1];
        const auto vals = p1_segment_values(rule.points[q].x);
        qp.shape[0] = vals[0];
        qp.shape[1] = vals[1];
        qp.grad[0] = Vec2(-1.0 / len, 0);
        qp.grad[1] = Vec2(1.0 / len, 0);
        qps.push_back(qp);
      }
    }
  } else {
    const QuadratureRule rule = triangle_rule(kStructureQuadDegree);
    qps.reserve(s.triangles.size() * rule.points.size());
    for (int c = 0; c < s.num_cells(); ++c) {
      const auto& tri = s.triangles[c];
      const double area2 = 2.0 * s.ref_triangle_area(c);
      const auto grads =
          p1_gradients(s.ref_points[tri[0]], s.ref_points[tri[1]], s.ref_points[tri[2]]);
      for (size_t q = 0; q < rule.points.size(); ++q) {
        StructQP qp;
        qp.weight = rule.weights[q] * area2;
        qp.nn = 3;
        const auto vals = p1_triangle_values(rule.points[q]);
        for (int a = 0; a < 3; ++a) {
          qp.nodes[a] = tri[a];
          qp.shape[a] = vals[a];
          qp.grad[a] = grads[a];
        }
        qps.push_back(qp);
      }
    }
  }
  return qps;
}

Vec2 mapped_position(const StructQP& qp, const Vector& X) {
  Vec2 pos;
  for (int a = 0; a < qp.nn; ++a)
    pos += qp.shape[a] * Vec2(X[2 * qp.nodes[a]], X[2 * qp.nodes[a] + 1]);
  return pos;
}

// Deformation gradient columns: col[j][k] = dX_k/ds_j. For m=1 only col[0] is
// meaningful (the curve tangent dX/ds).
void deformation_columns(const StructQP& qp, const Vector& X, Vec2 col[2]) {
  col[0] = Vec2();
  col[1] = Vec2();
  for (int a = 0; a < qp.nn; ++a) {
    const Vec2 xa(X[2 * qp.nodes[a]], X[2 * qp.nodes[a] + 1]);
    col[0] += qp.grad[a].x * xa;
    col[1] += qp.grad[a].y * xa;
  }
}

PointLocation locate_or_throw(const FluidMesh& mesh, const Vec2& pos, int node) {
  auto loc = locate_point(mesh, pos);
  if (!loc) throw StructureEscapeError(pos, node);
  return *loc;
}

}  // namespace

SpMat assemble_fluid_mass(const FluidMesh& mesh) {
  const int n = 2 * mesh.num_fine_vertices();
  const QuadratureRule rule = triangle_rule(kFluidQuadDegree);
  std::vector<Triplet> trips;
  trips.reserve(mesh.fine_triangles.size() * 18);
  for (int t = 0; t < mesh.num_fine_triangles(); ++t) {
    const auto& tri = mesh.fine_triangles[t];
    const double area2 = 2.0 * mesh.fine_triangle_area(t);
    double local[3][3] = {};
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const auto vals = p1_triangle_values(rule.points[q]);
      const double w = rule.weights[q] * area2;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) local[a][b] += w * vals[a] * vals[b];
    }
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int k = 0; k < 2; ++k)
          trips.emplace_back(2 * tri[a] + k, 2 * tri[b] + k, local[a][b]);
  }
  SpMat M(n, n);
  M.setFromTriplets(trips.begin(), trips.end());
  return M;
}

SpMat assemble_viscous(const FluidMesh& mesh) {
  const int n = 2 * mesh.num_fine_vertices();
  std::vector<Triplet> trips;
  trips.reserve(mesh.fine_triangles.size() * 36);
  for (int t = 0; t < mesh.num_fine_triangles(); ++t) {
    const auto& tri = mesh.fine_triangles[t];
    const double area = mesh.fine_triangle_area(t);
    const auto g = p1_gradients(mesh.fine_vertices[tri[0]], mesh.fine_vertices[tri[1]],
                                mesh.fine_vertices[tri[2]]);
    // Unit-viscosity form matching the Newtonian stress nu (Grad u + Grad u^T):
    // a(u, v) = (nu/2)(Grads u, Grads v) with Grads u = Grad u + (Grad u)^T,
    // so the entry is delta_ck (g_a . g_b) + g_b[k] g_a[c], times the area.
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const double gg = dot(g[a], g[b]);
        const double ga[2] = {g[a].x, g[a].y};
        const double gb[2] = {g[b].x, g[b].y};
        for (int k = 0; k < 2; ++k)
          for (int c = 0; c < 2; ++c) {
            const double val = area * ((k == c ? gg : 0.0) + gb[k] * ga[c]);
            trips.emplace_back(2 * tri[a] + k, 2 * tri[b] + c, val);
          }
      }
  }
  SpMat K(n, n);
  K.setFromTriplets(trips.begin(), trips.end());
  return K;
}

SpMat assemble_transport(const FluidMesh& mesh, const Vector& u_prev, double rho_f) {
  const int n = 2 * mesh.num_fine_vertices();
  if (u_prev.size() != n)
    throw std::invalid_argument("assemble_transport: velocity size mismatch");
  if (!u_prev.allFinite())
    throw std::invalid_argument("assemble_transport: non-finite velocity");
  const QuadratureRule rule = triangle_rule(kFluidQuadDegree);
  std::vector<Triplet> trips;
  trips.reserve(mesh.fine_triangles.size() * 18);
  for (int t = 0; t < mesh.num_fine_triangles(); ++t) {
    const auto& tri = mesh.fine_triangles[t];
    const double area2 = 2.0 * mesh.fine_triangle_area(t);
    const auto g = p1_gradients(mesh.fine_vertices[tri[0]], mesh.fine_vertices[tri[1]],
                                mesh.fine_vertices[tri[2]]);
    const Vec2 uloc[3] = {Vec2(u_prev[2 * tri[0]], u_prev[2 * tri[0] + 1]),
                          Vec2(u_prev[2 * tri[1]], u_prev[2 * tri[1] + 1]),
                          Vec2(u_prev[2 * tri[2]], u_prev[2 * tri[2] + 1])};
    // P[a][b] = int (u_prev . g_a) N_b
    double P[3][3] = {};
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const auto vals = p1_triangle_values(rule.points[q]);
      const Vec2 uq = vals[0] * uloc[0] + vals[1] * uloc[1] + vals[2] * uloc[2];
      const double w = rule.weights[q] * area2;
      for (int a = 0; a < 3; ++a) {
        const double uga = w * dot(uq, g[a]);
        for (int b = 0; b < 3; ++b) P[a][b] += uga * vals[b];
      }
    }
    // Entry (test (a,k), trial (b,k)) = (rho_f/2)(P[b][a] - P[a][b]); exact
    // skew symmetry comes from assembling both orientations of the same pair.
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const double val = 0.5 * rho_f * (P[b][a] - P[a][b]);
        if (val == 0.0) continue;
        for (int k = 0; k < 2; ++k)
          trips.emplace_back(2 * tri[a] + k, 2 * tri[b] + k, val);
      }
  }
  SpMat T(n, n);
  T.setFromTriplets(trips.begin(), trips.end());
  return T;
}

SpMat assemble_divergence(const FluidMesh& mesh) {
  const int np = mesh.num_coarse_vertices() + mesh.num_coarse_triangles();
  const int nu = 2 * mesh.num_fine_vertices();
  const QuadratureRule rule = triangle_rule(kFluidQuadDegree);
  std::vector<Triplet> trips;
  trips.reserve(mesh.fine_triangles.size() * 24);
  for (int t = 0; t < mesh.num_fine_triangles(); ++t) {
    const auto& tri = mesh.fine_triangles[t];
    const Vec2& fa = mesh.fine_vertices[tri[0]];
    const Vec2& fb = mesh.fine_vertices[tri[1]];
    const Vec2& fc = mesh.fine_vertices[tri[2]];
    const double area2 = 2.0 * mesh.fine_triangle_area(t);
    const auto g = p1_gradients(fa, fb, fc);
    const int parent = mesh.fine_to_coarse[t];
    const auto& ctri = mesh.coarse_triangles[parent];
    const Vec2& ca = mesh.coarse_vertices[ctri[0]];
    const Vec2& cb = mesh.coarse_vertices[ctri[1]];
    const Vec2& cc = mesh.coarse_vertices[ctri[2]];
    const double carea = signed_area(ca, cb, cc);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const auto vals = p1_triangle_values(rule.points[q]);
      const Vec2 x = vals[0] * fa + vals[1] * fb + vals[2] * fc;
      const double w = rule.weights[q] * area2;
      const double psi[3] = {signed_area(x, cb, cc) / carea,
                             signed_area(ca, x, cc) / carea,
                             signed_area(ca, cb, x) / carea};
      for (int b = 0; b < 3; ++b) {
        const double gb[2] = {g[b].x, g[b].y};
        for (int c = 0; c < 2; ++c) {
          const double dv = -w * gb[c];
          for (int k = 0; k < 3; ++k)
            trips.emplace_back(ctri[k], 2 * tri[b] + c, dv * psi[k]);
          trips.emplace_back(mesh.num_coarse_vertices() + parent, 2 * tri[b] + c, dv);
        }
      }
    }
  }
  SpMat B(np, nu);
  B.setFromTriplets(trips.begin(), trips.end());
  return B;
}

namespace {

SpMat structure_scalar_expand(const StructureMesh& s, bool mass, bool stiffness) {
  const int n = 2 * s.num_nodes();
  const auto qps = structure_quadrature(s);
  std::vector<Triplet> trips;
  trips.reserve(qps.size() * 18);
  for (const auto& qp : qps)
    for (int a = 0; a < qp.nn; ++a)
      for (int b = 0; b < qp.nn; ++b) {
        double val = 0;
        if (mass) val += qp.weight * qp.shape[a] * qp.shape[b];
        if (stiffness) {
          double gg = qp.grad[a].x * qp.grad[b].x;
          if (s.m == 2) gg += qp.grad[a].y * qp.grad[b].y;
          val += qp.weight * gg;
        }
        for (int k = 0; k < 2; ++k)
          trips.emplace_back(2 * qp.nodes[a] + k, 2 * qp.nodes[b] + k, val);
      }
  SpMat M(n, n);
  M.setFromTriplets(trips.begin(), trips.end());
  return M;
}

}  // namespace

SpMat assemble_structure_mass(const StructureMesh& s) {
  return structure_scalar_expand(s, true, false);
}

SpMat assemble_structure_stiffness(const StructureMesh& s) {
  return structure_scalar_expand(s, false, true);
}

SpMat assemble_coupling_structure(const StructureMesh& s, CouplingForm form) {
  return structure_scalar_expand(s, true, form == CouplingForm::H1);
}

SpMat assemble_coupling_fluid(const FluidMesh& mesh, const StructureMesh& s,
                              const Vector& X, CouplingForm form) {
  const int nrow = 2 * s.num_nodes();
  const int ncol = 2 * mesh.num_fine_vertices();
  const auto qps = structure_quadrature(s);
  std::vector<Triplet> trips;
  trips.reserve(qps.size() * 18);
  for (const auto& qp : qps) {
    const Vec2 pos = mapped_position(qp, X);
    const PointLocation loc = locate_or_throw(mesh, pos, qp.nodes[0]);
    const auto& ftri = mesh.fine_triangles[loc.triangle];
    Vec2 fcols[2];
    std::array<Vec2, 3> fgrad;
    if (form == CouplingForm::H1) {
      deformation_columns(qp, X, fcols);
      fgrad = p1_gradients(mesh.fine_vertices[ftri[0]], mesh.fine_vertices[ftri[1]],
                           mesh.fine_vertices[ftri[2]]);
    }
    for (int l = 0; l < qp.nn; ++l)
      for (int a = 0; a < 3; ++a) {
        double val = qp.weight * qp.shape[l] * loc.bary[a];
        if (form == CouplingForm::H1) {
          // Grad_s zeta_l . Grad_s[phi_a(X(s))], chain rule via the columns of
          // the deformation gradient.
          double extra = qp.grad[l].x * dot(fgrad[a], fcols[0]);
          if (s.m == 2) extra += qp.grad[l].y * dot(fgrad[a], fcols[1]);
          val += qp.weight * extra;
        }
        if (val == 0.0) continue;
        for (int k = 0; k < 2; ++k)
          trips.emplace_back(2 * qp.nodes[l] + k, 2 * ftri[a] + k, val);
      }
  }
  SpMat L(nrow, ncol);
  L.setFromTriplets(trips.begin(), trips.end());
  return L;
}

Vector assemble_feibm_force(const FluidMesh& mesh, const StructureMesh& s,
                            const Vector& X, double kappa) {
  Vector F = Vector::Zero(2 * mesh.num_fine_vertices());
  const auto qps = structure_quadrature(s);
  for (const auto& qp : qps) {
    const Vec2 pos = mapped_position(qp, X);
    const PointLocation loc = locate_or_throw(mesh, pos, qp.nodes[0]);
    const auto& ftri = mesh.fine_triangles[loc.triangle];
    const auto fgrad =
        p1_gradients(mesh.fine_vertices[ftri[0]], mesh.fine_vertices[ftri[1]],
                     mesh.fine_vertices[ftri[2]]);
    Vec2 fcols[2];
    deformation_columns(qp, X, fcols);
    const int ncols = s.m;
    for (int a = 0; a < 3; ++a) {
      // (Grad_s X, Grad_s[phi_a(X) e_k])_B = sum_j F_kj (grad phi_a . F_:j)
      for (int k = 0; k < 2; ++k) {
        double val = 0;
        for (int j = 0; j < ncols; ++j) {
          const double fkj = k == 0 ? fcols[j].x : fcols[j].y;
          val += fkj * dot(fgrad[a], fcols[j]);
        }
        F[2 * ftri[a] + k] -= kappa * qp.weight * val;
      }
    }
  }
  return F;
}

SpMat assemble_feibm_added_mass(const FluidMesh& mesh, const StructureMesh& s,
                                const Vector& X) {
  const int n = 2 * mesh.num_fine_vertices();
  const auto qps = structure_quadrature(s);
  std::vector<Triplet> trips;
  trips.reserve(qps.size() * 18);
  for (const auto& qp : qps) {
    const Vec2 pos = mapped_position(qp, X);
    const PointLocation loc = locate_or_throw(mesh, pos, qp.nodes[0]);
    const auto& ftri = mesh.fine_triangles[loc.triangle];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const double val = qp.weight * loc.bary[a] * loc.bary[b];
        for (int k = 0; k < 2; ++k)
          trips.emplace_back(2 * ftri[a] + k, 2 * ftri[b] + k, val);
      }
  }
  SpMat M(n, n);
  M.setFromTriplets(trips.begin(), trips.end());
  return M;
}

void pressure_mean_weights(const FluidMesh& mesh, Vector& w_p1, Vector& w_p0) {
  w_p1 = Vector::Zero(mesh.num_coarse_vertices());
  w_p0 = Vector::Zero(mesh.num_coarse_triangles());
  for (int t = 0; t < mesh.num_coarse_triangles(); ++t) {
    const double area = mesh.coarse_triangle_area(t);
    for (int k = 0; k < 3; ++k) w_p1[mesh.coarse_triangles[t][k]] += area / 3.0;
    w_p0[t] = area;
  }
}

}  // namespace fsi
