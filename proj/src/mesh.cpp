#include "fsi/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fsi {

namespace {

constexpr double kEpsGeo = 1e-12 * 1.4142135623730951;  // 1e-12 * diam(unit square)

// Vertex index on a structured (k+1)x(k+1) grid.
inline int vidx(int k, int i, int j) { return j * (k + 1) + i; }

// Triangle index of cell (i,j): even = lower triangle, odd = upper triangle.
inline int tidx(int k, int i, int j, int upper) { return 2 * (j * k + i) + upper; }

// Diagonal orientation of coarse cell (i,j) on an n x n grid: true for the
// bottom-left-to-top-right diagonal. Cells point their diagonal at the nearest
// domain corner, so every corner vertex is shared by both triangles of its
// cell; with a single uniform orientation the two off-diagonal corner cells
// carry a spurious pressure mode of the composite P1+P0 space under enclosed
// (all-wall) boundary conditions.
inline bool cell_slash(int n, int i, int j) {
  return (2 * i + 1 <= n) == (2 * j + 1 <= n);
}

void build_structured(int k, int n_cells_coarse, int sub,
                      std::vector<Vec2>& vertices,
                      std::vector<std::array<int, 3>>& triangles) {
  vertices.resize(static_cast<size_t>(k + 1) * (k + 1));
  const double h = 1.0 / k;
  for (int j = 0; j <= k; ++j)
    for (int i = 0; i <= k; ++i) vertices[vidx(k, i, j)] = Vec2(i * h, j * h);
  triangles.resize(static_cast<size_t>(2) * k * k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < k; ++i) {
      const int v00 = vidx(k, i, j), v10 = vidx(k, i + 1, j);
      const int v01 = vidx(k, i, j + 1), v11 = vidx(k, i + 1, j + 1);
      if (cell_slash(n_cells_coarse, i / sub, j / sub)) {
        triangles[tidx(k, i, j, 0)] = {v00, v10, v11};
        triangles[tidx(k, i, j, 1)] = {v00, v11, v01};
      } else {
        triangles[tidx(k, i, j, 0)] = {v00, v10, v01};
        triangles[tidx(k, i, j, 1)] = {v10, v11, v01};
      }
    }
}

}  // namespace

bool FluidMesh::fine_vertex_on_boundary(int v) const {
  const int k = 2 * n;
  const int i = v % (k + 1), j = v / (k + 1);
  return i == 0 || i == k || j == 0 || j == k;
}

double FluidMesh::coarse_triangle_area(int t) const {
  const auto& tri = coarse_triangles[t];
  return signed_area(coarse_vertices[tri[0]], coarse_vertices[tri[1]],
                     coarse_vertices[tri[2]]);
}

double FluidMesh::fine_triangle_area(int t) const {
  const auto& tri = fine_triangles[t];
  return signed_area(fine_vertices[tri[0]], fine_vertices[tri[1]],
                     fine_vertices[tri[2]]);
}

FluidMesh build_unit_square_mesh(int n) {
  if (n < 1) throw std::invalid_argument("build_unit_square_mesh: n must be >= 1");
  FluidMesh mesh;
  mesh.n = n;
  mesh.h_x = 1.0 / n;
  build_structured(n, n, 1, mesh.coarse_vertices, mesh.coarse_triangles);
  build_structured(2 * n, n, 2, mesh.fine_vertices, mesh.fine_triangles);

  // Red refinement reproduces the structured mesh at 2n with the fine cells
  // inheriting the coarse-cell diagonal; the four children of each coarse
  // triangle are known in closed form per orientation.
  const int k = 2 * n;
  mesh.coarse_to_fine.resize(mesh.coarse_triangles.size());
  mesh.fine_to_coarse.assign(mesh.fine_triangles.size(), -1);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int I = 2 * i, J = 2 * j;
      if (cell_slash(n, i, j)) {
        mesh.coarse_to_fine[tidx(n, i, j, 0)] = {
            tidx(k, I, J, 0), tidx(k, I + 1, J, 0), tidx(k, I + 1, J + 1, 0),
            tidx(k, I + 1, J, 1)};
        mesh.coarse_to_fine[tidx(n, i, j, 1)] = {
            tidx(k, I, J, 1), tidx(k, I + 1, J + 1, 1), tidx(k, I, J + 1, 1),
            tidx(k, I, J + 1, 0)};
      } else {
        mesh.coarse_to_fine[tidx(n, i, j, 0)] = {
            tidx(k, I, J, 0), tidx(k, I + 1, J, 0), tidx(k, I, J + 1, 0),
            tidx(k, I, J, 1)};
        mesh.coarse_to_fine[tidx(n, i, j, 1)] = {
            tidx(k, I + 1, J, 1), tidx(k, I + 1, J + 1, 1), tidx(k, I, J + 1, 1),
            tidx(k, I + 1, J + 1, 0)};
      }
    }
  for (int c = 0; c < mesh.num_coarse_triangles(); ++c)
    for (int child : mesh.coarse_to_fine[c]) mesh.fine_to_coarse[child] = c;
  return mesh;
}

std::optional<PointLocation> locate_point(const FluidMesh& mesh, const Vec2& p) {
  if (p.x < -kEpsGeo || p.x > 1.0 + kEpsGeo || p.y < -kEpsGeo || p.y > 1.0 + kEpsGeo)
    return std::nullopt;
  const int k = 2 * mesh.n;
  const double hf = 1.0 / k;
  const int ci = std::clamp(static_cast<int>(std::floor(p.x / hf)), 0, k - 1);
  const int cj = std::clamp(static_cast<int>(std::floor(p.y / hf)), 0, k - 1);

  // Candidate triangles from the +/-1 cell window, tested in ascending index
  // order so shared edges and vertices resolve to the lowest index.
  int candidates[18];
  int count = 0;
  for (int dj = -1; dj <= 1; ++dj)
    for (int di = -1; di <= 1; ++di) {
      const int i = ci + di, j = cj + dj;
      if (i < 0 || i >= k || j < 0 || j >= k) continue;
      candidates[count++] = tidx(k, i, j, 0);
      candidates[count++] = tidx(k, i, j, 1);
    }
  std::sort(candidates, candidates + count);

  for (int c = 0; c < count; ++c) {
    const int t = candidates[c];
    const auto& tri = mesh.fine_triangles[t];
    const Vec2& a = mesh.fine_vertices[tri[0]];
    const Vec2& b = mesh.fine_vertices[tri[1]];
    const Vec2& d = mesh.fine_vertices[tri[2]];
    const double area = signed_area(a, b, d);
    const double l0 = signed_area(p, b, d) / area;
    const double l1 = signed_area(a, p, d) / area;
    const double l2 = signed_area(a, b, p) / area;
    if (l0 >= -kEpsGeo && l1 >= -kEpsGeo && l2 >= -kEpsGeo)
      return PointLocation{t, {l0, l1, l2}};
  }
  return std::nullopt;
}

double StructureMesh::ref_triangle_area(int c) const {
  const auto& tri = triangles[c];
  return signed_area(ref_points[tri[0]], ref_points[tri[1]], ref_points[tri[2]]);
}

double StructureMesh::ref_measure() const {
  double total = 0;
  if (m == 1) {
    for (double len : segment_lengths) total += len;
  } else {
    for (int c = 0; c < num_cells(); ++c) total += ref_triangle_area(c);
  }
  return total;
}

namespace {

// Position on the rectangle perimeter at arclength l from the lower-left
// corner, walking counterclockwise.
Vec2 rectangle_point(const RectangleShape& r, double l) {
  const Vec2 c0(r.center.x - 0.5 * r.w, r.center.y - 0.5 * r.h);
  if (l < r.w) return c0 + Vec2(l, 0);
  l -= r.w;
  if (l < r.h) return c0 + Vec2(r.w, l);
  l -= r.h;
  if (l < r.w) return c0 + Vec2(r.w - l, r.h);
  l -= r.w;
  return c0 + Vec2(0, r.h - l);
}

StructureMesh make_closed_curve(int n_s, double param_total) {
  StructureMesh s;
  s.m = 1;
  s.closed = true;
  s.h_s = param_total / n_s;
  s.ref_params.resize(n_s);
  s.segments.resize(n_s);
  s.segment_lengths.assign(n_s, s.h_s);
  for (int i = 0; i < n_s; ++i) {
    s.ref_params[i] = param_total * i / n_s;
    s.segments[i] = {i, (i + 1) % n_s};
  }
  return s;
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

StructureMesh build_structure_curve(const StructureShape& shape, int n_s) {
  if (n_s < 3) throw std::invalid_argument("build_structure_curve: need n_s >= 3");
  StructureMesh s = make_closed_curve(n_s, kTwoPi);
  s.initial_positions.resize(n_s);
  if (const auto* e = std::get_if<EllipseShape>(&shape)) {
    if (e->a <= 0 || e->b <= 0)
      throw std::invalid_argument("build_structure_curve: degenerate ellipse axes");
    for (int i = 0; i < n_s; ++i) {
      const double t = s.ref_params[i];
      s.initial_positions[i] = e->center + Vec2(e->a * std::cos(t), e->b * std::sin(t));
    }
  } else {
    const auto& r = std::get<RectangleShape>(shape);
    if (r.w <= 0 || r.h <= 0)
      throw std::invalid_argument("build_structure_curve: degenerate rectangle sides");
    // Arclength-proportional parameter: node i sits at perimeter fraction i/n_s.
    const double perimeter = 2 * (r.w + r.h);
    for (int i = 0; i < n_s; ++i)
      s.initial_positions[i] = rectangle_point(r, perimeter * i / n_s);
  }
  return s;
}

namespace {

// Concentric-ring disk triangulation: ring k of K carries 6k nodes at radius
// k/K; annuli are triangulated by merging the two rings in angular order.
void build_unit_disk(int K, std::vector<Vec2>& nodes,
                     std::vector<std::array<int, 3>>& tris) {
  nodes.clear();
  tris.clear();
  std::vector<int> ring_start(K + 1);
  for (int k = 0; k <= K; ++k) {
    ring_start[k] = static_cast<int>(nodes.size());
    const int cnt = k == 0 ? 1 : 6 * k;
    for (int t = 0; t < cnt; ++t) {
      const double ang = kTwoPi * t / cnt;
      const double r = static_cast<double>(k) / K;
      nodes.push_back(Vec2(r * std::cos(ang), r * std::sin(ang)));
    }
  }
  // Center fan.
  for (int t = 0; t < 6; ++t)
    tris.push_back({ring_start[1] + t, ring_start[1] + (t + 1) % 6, ring_start[0]});
  for (int k = 1; k < K; ++k) {
    const int n_in = 6 * k, n_out = 6 * (k + 1);
    const int in0 = ring_start[k], out0 = ring_start[k + 1];
    int i = 0, o = 0;
    while (i < n_in || o < n_out) {
      const bool advance_outer =
          o < n_out && (i >= n_in || (o + 1) * n_in <= (i + 1) * n_out);
      if (advance_outer) {
        tris.push_back({out0 + o % n_out, out0 + (o + 1) % n_out, in0 + i % n_in});
        ++o;
      } else {
        tris.push_back({in0 + (i + 1) % n_in, in0 + i % n_in, out0 + o % n_out});
        ++i;
      }
    }
  }
}

}  // namespace

StructureMesh build_structure_area(const StructureShape& shape, double h_s) {
  if (h_s <= 0) throw std::invalid_argument("build_structure_area: h_s must be > 0");
  StructureMesh s;
  s.m = 2;
  s.closed = false;
  if (const auto* e = std::get_if<EllipseShape>(&shape)) {
    if (e->a <= 0 || e->b <= 0)
      throw std::invalid_argument("build_structure_area: degenerate ellipse axes");
    const double rmax = std::max(e->a, e->b);
    const int K = std::max(1, static_cast<int>(std::lround(rmax / h_s)));
    s.h_s = rmax / K;
    build_unit_disk(K, s.ref_points, s.triangles);
    for (auto& p : s.ref_points) p = e->center + Vec2(e->a * p.x, e->b * p.y);
  } else {
    const auto& r = std::get<RectangleShape>(shape);
    if (r.w <= 0 || r.h <= 0)
      throw std::invalid_argument("build_structure_area: degenerate rectangle sides");
    const int nw = std::max(1, static_cast<int>(std::lround(r.w / h_s)));
    const int nh = std::max(1, static_cast<int>(std::lround(r.h / h_s)));
    s.h_s = std::max(r.w / nw, r.h / nh);
    const Vec2 c0(r.center.x - 0.5 * r.w, r.center.y - 0.5 * r.h);
    for (int j = 0; j <= nh; ++j)
      for (int i = 0; i <= nw; ++i)
        s.ref_points.push_back(c0 + Vec2(r.w * i / nw, r.h * j / nh));
    for (int j = 0; j < nh; ++j)
      for (int i = 0; i < nw; ++i) {
        const int v00 = j * (nw + 1) + i, v10 = v00 + 1;
        const int v01 = v00 + nw + 1, v11 = v01 + 1;
        s.triangles.push_back({v00, v10, v11});
        s.triangles.push_back({v00, v11, v01});
      }
  }
  for (int c = 0; c < s.num_cells(); ++c)
    if (s.ref_triangle_area(c) <= 0)
      throw std::logic_error("build_structure_area: non-positive triangle area");
  s.initial_positions = s.ref_points;
  return s;
}

}  // namespace fsi
