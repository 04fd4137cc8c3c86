#include "fsi/schemes.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "fsi/diagnostics.hpp"
#include "fsi/errors.hpp"

namespace fsi {

Vector interleave(const std::vector<Vec2>& points) {
  Vector v(2 * static_cast<int>(points.size()));
  for (size_t i = 0; i < points.size(); ++i) {
    v[2 * i] = points[i].x;
    v[2 * i + 1] = points[i].y;
  }
  return v;
}

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void stretch_initial_positions(StructureMesh& s, const Vec2& center, double gx,
                               double gy) {
  for (auto& p : s.initial_positions)
    p = center + Vec2(gx * (p.x - center.x), gy * (p.y - center.y));
}

BcSpec make_bc_spec(BcPreset preset) {
  BcSpec bc;
  if (preset == BcPreset::symmetry_quarter) {
    bc.left = EdgeBc::symmetry;
    bc.bottom = EdgeBc::symmetry;
  }
  return bc;
}

}  // namespace

StructureMesh build_structure(const SimulationConfig& cfg) {
  switch (cfg.preset) {
    case GeometryPreset::ellipse_codim1: {
      const int n_s = std::max(3, static_cast<int>(std::lround(kTwoPi / cfg.h_s)));
      return build_structure_curve(EllipseShape{cfg.a, cfg.b, cfg.center}, n_s);
    }
    case GeometryPreset::rectangle_codim1: {
      const int n_s = std::max(4, static_cast<int>(std::lround(kTwoPi / cfg.h_s)));
      return build_structure_curve(RectangleShape{cfg.rect_w, cfg.rect_h, cfg.center},
                                   n_s);
    }
    case GeometryPreset::ellipse_codim0: {
      const double radius = std::sqrt(cfg.a * cfg.b);
      StructureMesh s =
          build_structure_area(EllipseShape{radius, radius, cfg.center}, cfg.h_s);
      const double g = std::sqrt(cfg.a / cfg.b);
      stretch_initial_positions(s, cfg.center, g, 1.0 / g);
      return s;
    }
    default: {
      const double side = std::sqrt(cfg.rect_w * cfg.rect_h);
      StructureMesh s =
          build_structure_area(RectangleShape{side, side, cfg.center}, cfg.h_s);
      stretch_initial_positions(s, cfg.center, cfg.rect_w / side, cfg.rect_h / side);
      return s;
    }
  }
}

Simulation::Simulation(const SimulationConfig& cfg) : cfg_(cfg) {
  validate_config(cfg_);
  const int n = std::max(1, static_cast<int>(std::lround(1.0 / cfg_.h_x)));
  mesh_ = build_unit_square_mesh(n);
  structure_ = build_structure(cfg_);
  dofs_ = build_dof_maps(mesh_, structure_, make_bc_spec(cfg_.bc));
  blocks_ = precompute_blocks(mesh_, structure_, cfg_.coupling_form);

  state_.u = Vector::Zero(dofs_.n_velocity);
  state_.p = Vector::Zero(dofs_.n_pressure());
  state_.X = interleave(structure_.initial_positions);
  state_.X_prev = cfg_.first_step == FirstStep::formal_zero
                      ? Vector(Vector::Zero(dofs_.n_structure))
                      : state_.X;
  state_.lambda = Vector::Zero(dofs_.n_multiplier());
}

SolverReport Simulation::advance() {
  fp_residuals_.clear();
  SolverReport report;
  switch (cfg_.scheme) {
    case Scheme::dlm: report = dlm_step(); break;
    case Scheme::feibm: report = feibm_step(); break;
    default: report = fixed_point_step(); break;
  }
  state_.step += 1;
  state_.t = state_.step * cfg_.dt;
  return report;
}

SolverReport Simulation::solve_monolithic(const Vector& X_lag, Candidate& out) const {
  const BlockSystem system = build_dlm_system(mesh_, structure_, dofs_, blocks_, cfg_,
                                              state_.u, X_lag, state_.X, state_.X_prev);
  auto [sol, report] = solve(system, cfg_.tol_lin);
  const BlockLayout& l = system.layout;
  out.u = sol.segment(l.off_u, l.n_u);
  out.p = sol.segment(l.off_p, l.n_p);
  out.X = sol.segment(l.off_x, l.n_s);
  out.lambda = sol.segment(l.off_l, l.n_s);
  return report;
}

void Simulation::commit(Candidate&& c) {
  state_.X_prev = std::move(state_.X);
  state_.u = std::move(c.u);
  state_.p = std::move(c.p);
  state_.X = std::move(c.X);
  state_.lambda = std::move(c.lambda);
}

SolverReport Simulation::dlm_step() {
  Candidate c;
  const SolverReport report = solve_monolithic(state_.X, c);
  commit(std::move(c));
  return report;
}

SolverReport Simulation::feibm_step() {
  const BlockSystem system =
      build_feibm_system(mesh_, structure_, dofs_, blocks_, cfg_, state_.u, state_.X);
  auto [sol, report] = solve(system, cfg_.tol_lin);
  const BlockLayout& l = system.layout;
  Vector u_new = sol.segment(l.off_u, l.n_u);
  Vector p_new = sol.segment(l.off_p, l.n_p);

  // Nodewise explicit update X_i <- X_i + dt * u(X_i).
  Vector X_new(dofs_.n_structure);
  for (int i = 0; i < structure_.num_nodes(); ++i) {
    const Vec2 xi(state_.X[2 * i], state_.X[2 * i + 1]);
    const auto loc = locate_point(mesh_, xi);
    if (!loc) throw StructureEscapeError(xi, i);
    const Vec2 v = eval_velocity(mesh_, u_new, *loc);
    X_new[2 * i] = xi.x + cfg_.dt * v.x;
    X_new[2 * i + 1] = xi.y + cfg_.dt * v.y;
  }

  state_.X_prev = std::move(state_.X);
  state_.u = std::move(u_new);
  state_.p = std::move(p_new);
  state_.X = std::move(X_new);
  return report;
}

SolverReport Simulation::fixed_point_step() {
  Vector X_lag = state_.X;
  Candidate c;
  for (int k = 1; k <= cfg_.fp_max_iter; ++k) {
    const SolverReport report = solve_monolithic(X_lag, c);
    const double r =
        coupling_residual(mesh_, structure_, blocks_, cfg_, c.u, c.X, state_.X);
    fp_residuals_.push_back(r);
    const Vector rate = (c.X - state_.X) / cfg_.dt;
    const double scale = std::max(1.0, std::sqrt(rate.dot(blocks_.Ms * rate)));
    if (k >= cfg_.fp_min_iter && r <= cfg_.fp_tol * scale) {
      commit(std::move(c));
      return report;
    }
    X_lag = c.X;
  }
  throw SolverError("fixed-point coupling did not converge in " +
                    std::to_string(cfg_.fp_max_iter) + " iterations");
}

}  // namespace fsi
