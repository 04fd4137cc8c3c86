#include "fsi/fem.hpp"

#include <cmath>
#include <stdexcept>

namespace fsi {

namespace {

void push_bary(QuadratureRule& rule, double l1, double l2, double l3, double w) {
  // Reference coordinates from barycentric (l1,l2,l3) on (0,0),(1,0),(0,1).
  rule.points.push_back(Vec2(l2, l3));
  rule.weights.push_back(w);
  (void)l1;
}

}  // namespace

QuadratureRule triangle_rule(int degree) {
  QuadratureRule rule;
  if (degree <= 1) {
    rule.degree = 1;
    push_bary(rule, 1.0 / 3, 1.0 / 3, 1.0 / 3, 0.5);
  } else if (degree == 2) {
    rule.degree = 2;
    // Edge-midpoint rule.
    push_bary(rule, 0.5, 0.5, 0.0, 1.0 / 6);
    push_bary(rule, 0.0, 0.5, 0.5, 1.0 / 6);
    push_bary(rule, 0.5, 0.0, 0.5, 1.0 / 6);
  } else if (degree <= 4) {
    // Six-point degree-4 rule (all weights positive, unlike the classical
    // four-point degree-3 rule); also serves degree-3 requests.
    rule.degree = 4;
    const double w1 = 0.223381589678011 * 0.5, a1 = 0.445948490915965;
    const double w2 = 0.109951743655322 * 0.5, a2 = 0.091576213509771;
    push_bary(rule, a1, a1, 1 - 2 * a1, w1);
    push_bary(rule, a1, 1 - 2 * a1, a1, w1);
    push_bary(rule, 1 - 2 * a1, a1, a1, w1);
    push_bary(rule, a2, a2, 1 - 2 * a2, w2);
    push_bary(rule, a2, 1 - 2 * a2, a2, w2);
    push_bary(rule, 1 - 2 * a2, a2, a2, w2);
  } else if (degree == 5) {
    rule.degree = 5;
    const double w0 = 0.225 * 0.5;
    const double w1 = 0.132394152788506 * 0.5, a1 = 0.470142064105115;
    const double w2 = 0.125939180544827 * 0.5, a2 = 0.101286507323456;
    push_bary(rule, 1.0 / 3, 1.0 / 3, 1.0 / 3, w0);
    push_bary(rule, a1, a1, 1 - 2 * a1, w1);
    push_bary(rule, a1, 1 - 2 * a1, a1, w1);
    push_bary(rule, 1 - 2 * a1, a1, a1, w1);
    push_bary(rule, a2, a2, 1 - 2 * a2, w2);
    push_bary(rule, a2, 1 - 2 * a2, a2, w2);
    push_bary(rule, 1 - 2 * a2, a2, a2, w2);
  } else {
    throw std::invalid_argument("triangle_rule: unsupported degree");
  }
  return rule;
}

QuadratureRule segment_rule(int degree) {
  if (degree < 0 || degree > 9)
    throw std::invalid_argument("segment_rule: unsupported degree");
  const int npts = degree / 2 + 1;  // n-point Gauss is exact to degree 2n-1
  QuadratureRule rule;
  rule.degree = 2 * npts - 1;
  // Gauss-Legendre nodes/weights on [-1,1], mapped to [0,1].
  std::vector<double> x, w;
  switch (npts) {
    case 1:
      x = {0.0};
      w = {2.0};
      break;
    case 2:
      x = {-0.5773502691896258, 0.5773502691896258};
      w = {1.0, 1.0};
      break;
    case 3:
      x = {-0.7745966692414834, 0.0, 0.7745966692414834};
      w = {5.0 / 9, 8.0 / 9, 5.0 / 9};
      break;
    case 4:
      x = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
           0.8611363115940526};
      w = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
           0.3478548451374538};
      break;
    default:
      x = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
           0.9061798459386640};
      w = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
           0.4786286704993665, 0.2369268850561891};
      break;
  }
  for (int i = 0; i < npts; ++i) {
    rule.points.push_back(Vec2(0.5 * (x[i] + 1.0), 0.0));
    rule.weights.push_back(0.5 * w[i]);
  }
  return rule;
}

std::array<double, 3> p1_triangle_values(const Vec2& ref) {
  return {1.0 - ref.x - ref.y, ref.x, ref.y};
}

std::array<Vec2, 3> p1_triangle_ref_gradients() {
  return {Vec2(-1, -1), Vec2(1, 0), Vec2(0, 1)};
}

std::array<Vec2, 3> p1_gradients(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double inv2A = 1.0 / (2.0 * signed_area(a, b, c));
  const auto perp = [](const Vec2& v) { return Vec2(-v.y, v.x); };
  return {inv2A * perp(c - b), inv2A * perp(a - c), inv2A * perp(b - a)};
}

std::array<double, 2> p1_segment_values(double ref) { return {1.0 - ref, ref}; }

DofMaps build_dof_maps(const FluidMesh& mesh, const StructureMesh& structure,
                       const BcSpec& bc) {
  DofMaps maps;
  maps.n_velocity = 2 * mesh.num_fine_vertices();
  maps.n_pressure_p1 = mesh.num_coarse_vertices();
  maps.n_pressure_p0 = mesh.num_coarse_triangles();
  maps.n_structure = 2 * structure.num_nodes();
  maps.velocity_constrained.assign(maps.n_velocity, 0);
  const int k = 2 * mesh.n;
  for (int v = 0; v < mesh.num_fine_vertices(); ++v) {
    const int i = v % (k + 1), j = v / (k + 1);
    bool fix_x = false, fix_y = false;
    // Walls pin both components; symmetry edges pin only the normal one.
    // Corners accumulate the constraints of both touching edges.
    const auto apply = [&](EdgeBc e, bool normal_is_x) {
      if (e == EdgeBc::wall) {
        fix_x = fix_y = true;
      } else if (normal_is_x) {
        fix_x = true;
      } else {
        fix_y = true;
      }
    };
    if (i == 0) apply(bc.left, true);
    if (i == k) apply(bc.right, true);
    if (j == 0) apply(bc.bottom, false);
    if (j == k) apply(bc.top, false);
    if (fix_x) {
      maps.velocity_constrained[2 * v] = 1;
      maps.dirichlet_velocity.push_back(2 * v);
    }
    if (fix_y) {
      maps.velocity_constrained[2 * v + 1] = 1;
      maps.dirichlet_velocity.push_back(2 * v + 1);
    }
  }
  return maps;
}

Vec2 eval_velocity(const FluidMesh& mesh, const Vector& u, const PointLocation& loc) {
  const auto& tri = mesh.fine_triangles[loc.triangle];
  Vec2 val;
  for (int a = 0; a < 3; ++a) {
    val.x += loc.bary[a] * u[2 * tri[a]];
    val.y += loc.bary[a] * u[2 * tri[a] + 1];
  }
  return val;
}

}  // namespace fsi
