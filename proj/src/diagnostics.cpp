#include "fsi/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fsi {

EnergyBreakdown total_energy(const ConstantBlocks& blocks, const SimulationConfig& cfg,
                             const Vector& u, const Vector& X, const Vector& X_prev) {
  EnergyBreakdown e;
  e.kinetic_fluid = 0.5 * cfg.rho_f * u.dot(blocks.Mf * u);
  if (cfg.delta_rho > 0) {
    const Vector v = (X - X_prev) / cfg.dt;
    e.kinetic_structure = 0.5 * cfg.delta_rho * v.dot(blocks.Ms * v);
  }
  e.elastic = 0.5 * cfg.kappa * X.dot(blocks.Ks * X);
  return e;
}

double energy_inequality_lhs(const ConstantBlocks& blocks, const SimulationConfig& cfg,
                             const Vector& u_new, const Vector& u_old,
                             const Vector& X_new, const Vector& X_old,
                             const Vector& X_prev_old) {
  const double dt = cfg.dt;
  double lhs = 0.5 * cfg.rho_f / dt *
               (u_new.dot(blocks.Mf * u_new) - u_old.dot(blocks.Mf * u_old));
  lhs += cfg.nu * u_new.dot(blocks.Kvisc * u_new);
  if (cfg.delta_rho > 0) {
    const Vector v_new = (X_new - X_old) / dt;
    const Vector v_old = (X_old - X_prev_old) / dt;
    lhs += 0.5 * cfg.delta_rho / dt *
           (v_new.dot(blocks.Ms * v_new) - v_old.dot(blocks.Ms * v_old));
  }
  lhs += 0.5 * cfg.kappa / dt *
         (X_new.dot(blocks.Ks * X_new) - X_old.dot(blocks.Ks * X_old));
  return lhs;
}

double energy_tolerance(double total_energy_old) {
  return 1e-8 * std::max(1.0, total_energy_old);
}

double enclosed_area(const StructureMesh& s, const Vector& X) {
  if (s.m == 1) {
    if (!s.closed) throw std::invalid_argument("enclosed_area: open curve");
    double twice = 0;
    const int n = s.num_nodes();
    for (int i = 0; i < n; ++i) {
      const int j = (i + 1) % n;
      twice += X[2 * i] * X[2 * j + 1] - X[2 * j] * X[2 * i + 1];
    }
    return 0.5 * twice;
  }
  double area = 0;
  for (const auto& tri : s.triangles) {
    const Vec2 a(X[2 * tri[0]], X[2 * tri[0] + 1]);
    const Vec2 b(X[2 * tri[1]], X[2 * tri[1] + 1]);
    const Vec2 c(X[2 * tri[2]], X[2 * tri[2] + 1]);
    area += signed_area(a, b, c);
  }
  return area;
}

double div_residual(const ConstantBlocks& blocks, const Vector& u) {
  return (blocks.B * u).norm();
}

double coupling_residual(const FluidMesh& mesh, const StructureMesh& s,
                         const ConstantBlocks& blocks, const SimulationConfig& cfg,
                         const Vector& u, const Vector& X_new, const Vector& X_old) {
  const SpMat Lf = assemble_coupling_fluid(mesh, s, X_new, blocks.form);
  const Vector r = Lf * u - (blocks.Ls * (X_new - X_old)) / cfg.dt;
  // ||.||_{0,B} of the Riesz representative, approximated with the lumped M_s.
  const Vector lumped = blocks.Ms * Vector::Ones(blocks.Ms.rows());
  double sq = 0;
  for (int i = 0; i < r.size(); ++i) sq += r[i] * r[i] / lumped[i];
  return std::sqrt(sq);
}

namespace {

// Even-odd ray crossing test against the closed node loop.
bool inside_loop(const StructureMesh& s, const Vector& X, const Vec2& q) {
  bool inside = false;
  const int n = s.num_nodes();
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    const double yi = X[2 * i + 1], yj = X[2 * j + 1];
    const double xi = X[2 * i], xj = X[2 * j];
    if ((yi > q.y) != (yj > q.y)) {
      const double xc = xi + (q.y - yi) / (yj - yi) * (xj - xi);
      if (q.x < xc) inside = !inside;
    }
  }
  return inside;
}

}  // namespace

double pressure_jump(const FluidMesh& mesh, const StructureMesh& s, const Vector& p,
                     const Vector& X) {
  if (s.m != 1 || !s.closed)
    throw std::invalid_argument("pressure_jump: needs a closed codim-1 curve");
  const int np1 = mesh.num_coarse_vertices();
  double in_sum = 0, in_area = 0, out_sum = 0, out_area = 0;
  for (int t = 0; t < mesh.num_coarse_triangles(); ++t) {
    const auto& tri = mesh.coarse_triangles[t];
    const Vec2& a = mesh.coarse_vertices[tri[0]];
    const Vec2& b = mesh.coarse_vertices[tri[1]];
    const Vec2& c = mesh.coarse_vertices[tri[2]];
    const Vec2 centroid = (1.0 / 3.0) * (a + b + c);
    const bool ia = inside_loop(s, X, a), ib = inside_loop(s, X, b);
    const bool ic = inside_loop(s, X, c), im = inside_loop(s, X, centroid);
    if (ia != ib || ib != ic || ic != im) continue;  // crossed by the curve
    const double mean =
        (p[tri[0]] + p[tri[1]] + p[tri[2]]) / 3.0 + p[np1 + t];
    const double area = mesh.coarse_triangle_area(t);
    if (im) {
      in_sum += mean * area;
      in_area += area;
    } else {
      out_sum += mean * area;
      out_area += area;
    }
  }
  if (in_area == 0 || out_area == 0)
    throw std::invalid_argument("pressure_jump: curve leaves no clean elements");
  return in_sum / in_area - out_sum / out_area;
}

double force_balance_jump(const StructureMesh& s, const Vector& X, double kappa) {
  const int n = s.num_nodes();
  Vec2 centroid;
  for (int i = 0; i < n; ++i) centroid += Vec2(X[2 * i], X[2 * i + 1]);
  centroid *= 1.0 / n;
  double R = 0;
  for (int i = 0; i < n; ++i)
    R += norm(Vec2(X[2 * i], X[2 * i + 1]) - centroid);
  R /= n;
  double tangent_sq = 0, total_len = 0;
  for (int c = 0; c < s.num_cells(); ++c) {
    const auto& seg = s.segments[c];
    const double len = s.segment_lengths[c];
    const Vec2 d = Vec2(X[2 * seg[1]] - X[2 * seg[0]], X[2 * seg[1] + 1] - X[2 * seg[0] + 1]);
    tangent_sq += dot(d, d) / len;  // |dX/ds|^2 * len
    total_len += len;
  }
  return kappa * (tangent_sq / total_len) / (R * R);
}

double velocity_l2(const ConstantBlocks& blocks, const Vector& u) {
  return std::sqrt(u.dot(blocks.Mf * u));
}

double structure_l2(const ConstantBlocks& blocks, const Vector& X) {
  return std::sqrt(X.dot(blocks.Ms * X));
}

namespace {

struct CircleErrIntegrand {
  Vec2 center;
  double R;
  double jump;
  double mean_shift;  // jump * pi R^2 (zero-mean convention on the unit square)
  const Vec2* tri_verts[3];
  double p_nodal[3];
  double p0;

  double exact(const Vec2& x) const {
    const double inside = norm(x - center) < R ? 1.0 : 0.0;
    return jump * inside - mean_shift;
  }
  double approx(const Vec2& x) const {
    // Barycentric relative to the root coarse triangle.
    const Vec2 &a = *tri_verts[0], &b = *tri_verts[1], &c = *tri_verts[2];
    const double area = signed_area(a, b, c);
    const double l0 = signed_area(x, b, c) / area;
    const double l1 = signed_area(a, x, c) / area;
    const double l2 = signed_area(a, b, x) / area;
    return p_nodal[0] * l0 + p_nodal[1] * l1 + p_nodal[2] * l2 + p0;
  }
  double sq_err(const Vec2& x) const {
    const double d = approx(x) - exact(x);
    return d * d;
  }
};

double integrate_sq_err(const CircleErrIntegrand& f, const Vec2& a, const Vec2& b,
                        const Vec2& c, int depth) {
  // Distance of the circle to this (sub)triangle: if all corners are on one
  // side and farther than the diameter, the indicator is constant inside.
  const double da = norm(a - f.center) - f.R;
  const double db = norm(b - f.center) - f.R;
  const double dc = norm(c - f.center) - f.R;
  const double diam = std::max({norm(a - b), norm(b - c), norm(c - a)});
  const bool clean = (da > diam && db > diam && dc > diam) ||
                     (da < -diam && db < -diam && dc < -diam);
  if (clean || depth == 0) {
    const double area = signed_area(a, b, c);
    // Degree-2 midpoint rule.
    const Vec2 m01 = 0.5 * (a + b), m12 = 0.5 * (b + c), m02 = 0.5 * (a + c);
    return area / 3.0 * (f.sq_err(m01) + f.sq_err(m12) + f.sq_err(m02));
  }
  const Vec2 m01 = 0.5 * (a + b), m12 = 0.5 * (b + c), m02 = 0.5 * (a + c);
  return integrate_sq_err(f, a, m01, m02, depth - 1) +
         integrate_sq_err(f, m01, b, m12, depth - 1) +
         integrate_sq_err(f, m02, m12, c, depth - 1) +
         integrate_sq_err(f, m01, m12, m02, depth - 1);
}

}  // namespace

double pressure_l2_error_circle(const FluidMesh& mesh, const Vector& p,
                                const Vec2& center, double R, double jump) {
  const int np1 = mesh.num_coarse_vertices();
  double sq = 0;
  for (int t = 0; t < mesh.num_coarse_triangles(); ++t) {
    const auto& tri = mesh.coarse_triangles[t];
    CircleErrIntegrand f;
    f.center = center;
    f.R = R;
    f.jump = jump;
    f.mean_shift = jump * std::numbers::pi * R * R;
    for (int k = 0; k < 3; ++k) {
      f.tri_verts[k] = &mesh.coarse_vertices[tri[k]];
      f.p_nodal[k] = p[tri[k]];
    }
    f.p0 = p[np1 + t];
    sq += integrate_sq_err(f, *f.tri_verts[0], *f.tri_verts[1], *f.tri_verts[2], 6);
  }
  return std::sqrt(sq);
}

double fit_rate(double e_coarse, double e_fine, double h_coarse, double h_fine) {
  if (!(e_coarse > 0) || !(e_fine > 0) || !(h_coarse > 0) || !(h_fine > 0))
    throw std::invalid_argument("fit_rate: needs positive errors and sizes");
  return std::log(e_coarse / e_fine) / std::log(h_coarse / h_fine);
}

std::vector<double> fit_rates(const std::vector<std::pair<double, double>>& errors) {
  if (errors.size() < 2)
    throw std::invalid_argument("fit_rates: need at least two levels");
  std::vector<double> rates;
  for (size_t i = 0; i + 1 < errors.size(); ++i)
    rates.push_back(
        fit_rate(errors[i].second, errors[i + 1].second, errors[i].first, errors[i + 1].first));
  return rates;
}

}  // namespace fsi
