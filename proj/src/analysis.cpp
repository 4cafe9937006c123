#include "stokeslab/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "stokeslab/quadrature.hpp"

namespace stokeslab {

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_vec(Vec2 v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g", v.x, v.y);
  return buf;
}

}  // namespace

// ---- discrete fields ----

Vec2 DiscreteField::velocity(Vec2 x, int cell) const {
  if (cell < 0) cell = locate_point(*mesh, x);
  return velocity_at(cell, mesh->barycentric(cell, x));
}

std::array<Vec2, 2> DiscreteField::gradient(Vec2 x, int cell) const {
  if (cell < 0) cell = locate_point(*mesh, x);
  return gradient_at(cell, mesh->barycentric(cell, x));
}

double DiscreteField::pressure(Vec2 x, int cell) const {
  if (cell < 0) cell = locate_point(*mesh, x);
  return pressure_at(cell, mesh->barycentric(cell, x));
}

Vec2 DiscreteField::velocity_at(int cell,
                                const std::array<double, 3>& lam) const {
  const BasisEval bv = eval_velocity_basis(*mesh, dofs.kind, cell, lam);
  Vec2 out{0.0, 0.0};
  for (int k = 0; k < dofs.dofs_per_cell; ++k) {
    const int s = cell_scalar_dof(*mesh, dofs, cell, k);
    out.x += vel[dofs.velocity_dof(0, s)] * bv.val[k];
    out.y += vel[dofs.velocity_dof(1, s)] * bv.val[k];
  }
  return out;
}

std::array<Vec2, 2> DiscreteField::gradient_at(
    int cell, const std::array<double, 3>& lam) const {
  const BasisEval bv = eval_velocity_basis(*mesh, dofs.kind, cell, lam);
  std::array<Vec2, 2> out{Vec2{0, 0}, Vec2{0, 0}};
  for (int k = 0; k < dofs.dofs_per_cell; ++k) {
    const int s = cell_scalar_dof(*mesh, dofs, cell, k);
    out[0] = out[0] + bv.grad[k] * vel[dofs.velocity_dof(0, s)];
    out[1] = out[1] + bv.grad[k] * vel[dofs.velocity_dof(1, s)];
  }
  return out;
}

double DiscreteField::pressure_at(int cell,
                                  const std::array<double, 3>& lam) const {
  const auto& tri = mesh->cells[cell];
  return pr[tri[0]] * lam[0] + pr[tri[1]] * lam[1] + pr[tri[2]] * lam[2];
}

DiscreteField make_field(const Mesh& mesh, const DofMap& dofs,
                         const Solution& sol) {
  DiscreteField f;
  f.mesh = &mesh;
  f.dofs = dofs;
  f.vel = Eigen::VectorXd::Zero(dofs.n_velocity());
  const int nis = dofs.n_interior_scalar;
  for (int s = 0; s < dofs.n_scalar; ++s) {
    const int ii = dofs.interior_index[s];
    if (ii < 0) continue;
    f.vel[dofs.velocity_dof(0, s)] = sol.u[ii];
    f.vel[dofs.velocity_dof(1, s)] = sol.u[nis + ii];
  }
  f.pr = sol.p;
  return f;
}

DiscreteField make_velocity_field(const Mesh& mesh, const DofMap& dofs,
                                  const Eigen::VectorXd& full_vel) {
  DiscreteField f;
  f.mesh = &mesh;
  f.dofs = dofs;
  f.vel = full_vel;
  return f;
}

// ---- exact solutions ----

ExactSolution manufactured_solution(const std::string& name) {
  if (name != "smooth_curl")
    throw std::invalid_argument("unknown manufactured solution '" + name +
                                "'");
  auto f = [](double t) { return t * t * (1.0 - t) * (1.0 - t); };
  auto df = [](double t) { return 2.0 * t * (1.0 - t) * (1.0 - 2.0 * t); };
  auto ddf = [](double t) { return 2.0 * (1.0 - 6.0 * t + 6.0 * t * t); };
  const double tp = 2.0 * std::numbers::pi;
  ExactSolution ex;
  ex.velocity = [=](Vec2 v) {
    return Vec2{f(v.x) * df(v.y), -df(v.x) * f(v.y)};
  };
  ex.gradient = [=](Vec2 v) {
    return std::array<Vec2, 2>{
        Vec2{df(v.x) * df(v.y), f(v.x) * ddf(v.y)},
        Vec2{-ddf(v.x) * f(v.y), -df(v.x) * df(v.y)}};
  };
  ex.pressure = [=](Vec2 v) { return std::sin(tp * v.x) * std::cos(tp * v.y); };
  return ex;
}

ExactSolution stokeslet(Vec2 z, Vec2 F) {
  const double c4 = 1.0 / (4.0 * std::numbers::pi);
  const double c2 = 1.0 / (2.0 * std::numbers::pi);
  ExactSolution ex;
  ex.velocity = [=](Vec2 x) {
    const Vec2 r = x - z;
    const double r2 = dot(r, r);
    const double rf = dot(r, F);
    const double lg = -0.5 * std::log(r2);
    return Vec2{c4 * (lg * F.x + r.x * rf / r2),
                c4 * (lg * F.y + r.y * rf / r2)};
  };
  ex.gradient = [=](Vec2 x) {
    const Vec2 r = x - z;
    const double r2 = dot(r, r);
    const double rf = dot(r, F);
    std::array<Vec2, 2> g;
    const double rr[2] = {r.x, r.y};
    const double ff[2] = {F.x, F.y};
    for (int i = 0; i < 2; ++i) {
      double gi[2];
      for (int k = 0; k < 2; ++k) {
        const double dik = (i == k) ? 1.0 : 0.0;
        gi[k] = c4 * (-rr[k] * ff[i] / r2 + (dik * rf + rr[i] * ff[k]) / r2 -
                      2.0 * rr[i] * rf * rr[k] / (r2 * r2));
      }
      g[i] = Vec2{gi[0], gi[1]};
    }
    return g;
  };
  ex.pressure = [=](Vec2 x) {
    const Vec2 r = x - z;
    return c2 * dot(r, F) / dot(r, r);
  };
  ex.singular = {z};
  return ex;
}

// ---- weighted norms ----

double weighted_lp_integral(
    const Mesh& mesh, const std::function<double(int, Vec2)>& abs_p_density,
    const std::optional<WeightSpec>& weight, int quad_degree,
    const std::vector<Vec2>& singular, int grading_levels) {
  const QuadRule& rule = triangle_rule(quad_degree);
  std::vector<Vec2> sing = singular;
  if (weight) {
    auto ws = weight->singular_points();
    sing.insert(sing.end(), ws.begin(), ws.end());
  }
  GradedOptions gopt;
  gopt.levels = grading_levels;
  gopt.check_divergence = true;
  double total = 0.0;
  for (int t = 0; t < mesh.nc(); ++t) {
    const auto pts = cell_quadrature_points(mesh, t, rule, sing, gopt);
    double cell_sum = 0.0;
    for (const auto& qp : pts) {
      const double wv = weight ? weight->eval(qp.x) : 1.0;
      cell_sum += qp.w * wv * abs_p_density(t, qp.x);
    }
    total += cell_sum;
  }
  return total;
}

namespace {

double grad_frob_p(const std::array<Vec2, 2>& g, double p) {
  const double s = dot(g[0], g[0]) + dot(g[1], g[1]);
  return std::pow(s, 0.5 * p);
}

}  // namespace

double norm_velocity(const DiscreteField& f, double p,
                     const std::optional<WeightSpec>& w, int quad_degree) {
  auto d = [&](int c, Vec2 x) {
    const Vec2 v = f.velocity_at(c, f.mesh->barycentric(c, x));
    return std::pow(dot(v, v), 0.5 * p);
  };
  return std::pow(weighted_lp_integral(*f.mesh, d, w, quad_degree), 1.0 / p);
}

double norm_gradient(const DiscreteField& f, double p,
                     const std::optional<WeightSpec>& w, int quad_degree) {
  auto d = [&](int c, Vec2 x) {
    return grad_frob_p(f.gradient_at(c, f.mesh->barycentric(c, x)), p);
  };
  return std::pow(weighted_lp_integral(*f.mesh, d, w, quad_degree), 1.0 / p);
}

double norm_pressure(const DiscreteField& f, double p,
                     const std::optional<WeightSpec>& w, int quad_degree) {
  auto d = [&](int c, Vec2 x) {
    return std::pow(std::abs(f.pressure_at(c, f.mesh->barycentric(c, x))), p);
  };
  return std::pow(weighted_lp_integral(*f.mesh, d, w, quad_degree), 1.0 / p);
}

double exact_norm_gradient(const Mesh& mesh, const ExactSolution& ex, double p,
                           const std::optional<WeightSpec>& w,
                           int quad_degree) {
  auto d = [&](int, Vec2 x) { return grad_frob_p(ex.gradient(x), p); };
  return std::pow(
      weighted_lp_integral(mesh, d, w, quad_degree, ex.singular), 1.0 / p);
}

double exact_norm_pressure(const Mesh& mesh, const ExactSolution& ex, double p,
                           const std::optional<WeightSpec>& w,
                           int quad_degree) {
  auto d = [&](int, Vec2 x) { return std::pow(std::abs(ex.pressure(x)), p); };
  return std::pow(
      weighted_lp_integral(mesh, d, w, quad_degree, ex.singular), 1.0 / p);
}

double err_velocity(const ExactSolution& ex, const DiscreteField& f, double p,
                    const std::optional<WeightSpec>& w, int quad_degree) {
  auto d = [&](int c, Vec2 x) {
    const Vec2 e = ex.velocity(x) - f.velocity_at(c, f.mesh->barycentric(c, x));
    return std::pow(dot(e, e), 0.5 * p);
  };
  return std::pow(
      weighted_lp_integral(*f.mesh, d, w, quad_degree, ex.singular), 1.0 / p);
}

double err_gradient(const ExactSolution& ex, const DiscreteField& f, double p,
                    const std::optional<WeightSpec>& w, int quad_degree) {
  auto d = [&](int c, Vec2 x) {
    auto g = ex.gradient(x);
    const auto gh = f.gradient_at(c, f.mesh->barycentric(c, x));
    g[0] = g[0] - gh[0];
    g[1] = g[1] - gh[1];
    return grad_frob_p(g, p);
  };
  return std::pow(
      weighted_lp_integral(*f.mesh, d, w, quad_degree, ex.singular), 1.0 / p);
}

double err_pressure(const ExactSolution& ex, const DiscreteField& f, double p,
                    const std::optional<WeightSpec>& w, int quad_degree) {
  auto d = [&](int c, Vec2 x) {
    const double e =
        ex.pressure(x) - f.pressure_at(c, f.mesh->barycentric(c, x));
    return std::pow(std::abs(e), p);
  };
  return std::pow(
      weighted_lp_integral(*f.mesh, d, w, quad_degree, ex.singular), 1.0 / p);
}

namespace {

// containment hint: the coarse cell holding each fine-cell barycenter; valid
// for every point of the fine cell when the meshes are nested
std::vector<int> coarse_hints(const Mesh& fine, const Mesh& coarse) {
  std::vector<int> hint(fine.nc());
  for (int t = 0; t < fine.nc(); ++t)
    hint[t] = locate_point(coarse, fine.barycenter(t));
  return hint;
}

}  // namespace

double cross_err_velocity_l2(const DiscreteField& fine,
                             const DiscreteField& coarse, int quad_degree) {
  const auto hint = coarse_hints(*fine.mesh, *coarse.mesh);
  auto d = [&](int c, Vec2 x) {
    const Vec2 e = fine.velocity_at(c, fine.mesh->barycentric(c, x)) -
                   coarse.velocity_at(hint[c], coarse.mesh->barycentric(hint[c], x));
    return dot(e, e);
  };
  return std::sqrt(
      weighted_lp_integral(*fine.mesh, d, std::nullopt, quad_degree));
}

double cross_err_gradient(const DiscreteField& fine,
                          const DiscreteField& coarse, double p,
                          const std::optional<WeightSpec>& w,
                          int quad_degree) {
  const auto hint = coarse_hints(*fine.mesh, *coarse.mesh);
  auto d = [&](int c, Vec2 x) {
    auto g = fine.gradient_at(c, fine.mesh->barycentric(c, x));
    const auto gh =
        coarse.gradient_at(hint[c], coarse.mesh->barycentric(hint[c], x));
    g[0] = g[0] - gh[0];
    g[1] = g[1] - gh[1];
    return grad_frob_p(g, p);
  };
  return std::pow(weighted_lp_integral(*fine.mesh, d, w, quad_degree),
                  1.0 / p);
}

double eoc(double err_coarse, double err_fine, double h_coarse,
           double h_fine) {
  if (err_coarse <= 0.0 || err_fine <= 0.0)
    throw std::invalid_argument("eoc: errors must be positive");
  if (!(h_coarse > h_fine))
    throw std::invalid_argument("eoc: mesh sizes must decrease");
  return std::log(err_coarse / err_fine) / std::log(h_coarse / h_fine);
}

// ---- experiments ----

namespace {

Mesh level_mesh(const ExperimentConfig& cfg, int level) {
  return build_structured_mesh(cfg.pattern, cfg.n0 << level, cfg.domain);
}

std::optional<WeightSpec> bind_weight(const std::optional<WeightSpec>& w,
                                      double h) {
  if (!w) return w;
  if (w->has_unbound_mesh_size()) return w->bind_mesh_size(h);
  return w;
}

void base_info(ExperimentResult& r, const ExperimentConfig& cfg) {
  r.info.emplace_back("experiment", r.name);
  r.info.emplace_back("pattern", pattern_name(cfg.pattern));
  r.info.emplace_back("pair", pair_name(cfg.pair));
  r.info.emplace_back("levels", std::to_string(cfg.levels));
  r.info.emplace_back("n0", std::to_string(cfg.n0));
  r.info.emplace_back("p", fmt(cfg.p));
  r.info.emplace_back("weight", cfg.weight ? cfg.weight->to_string() : "none");
  r.info.emplace_back("quad_degree", std::to_string(cfg.quad_degree));
  r.info.emplace_back("grading_levels", std::to_string(cfg.grading_levels));
  r.info.emplace_back("seed", std::to_string(cfg.seed));
  r.info.emplace_back("force_gates", cfg.force_gates ? "true" : "false");
}

long long pair_dofs(const DofMap& dofs) {
  return 2LL * dofs.n_interior_scalar + dofs.n_pressure;
}

void stability_gate(const ExperimentConfig& cfg) {
  if (cfg.force_gates) return;
  if (cfg.p != 2.0)
    throw GateError(
        "stability gate: certified only at p = 2; pass --force-gates to run "
        "anyway");
  if (!cfg.weight) return;
  const WeightSpec& w = *cfg.weight;
  if (w.kind() == WeightSpec::Kind::Constant) return;
  if (w.kind() == WeightSpec::Kind::DistPower && w.k_dim() == 0 &&
      w.singular_points().size() == 1 && w.alpha() > 0.0 && w.alpha() < 2.0) {
    const double eps = 0.05 * cfg.domain.diameter();
    if (!ap_restricted_check(w, cfg.domain, eps))
      throw GateError(
          "stability gate: weight is not positive and continuous on the "
          "boundary collar; pass --force-gates to run anyway");
    return;
  }
  throw GateError(
      "stability gate: certified weights are constants and interior "
      "point-distance powers with exponent in (0,2); pass --force-gates to "
      "run anyway");
}

}  // namespace

ExperimentResult mesh_info_experiment(const ExperimentConfig& cfg) {
  ExperimentResult r;
  r.name = "mesh-info";
  base_info(r, cfg);
  r.columns = {"nv",    "nc",      "ne",          "interior_edges",
               "th_ok", "h_ratio", "h_inradius"};
  for (int l = 0; l < cfg.levels; ++l) {
    const Mesh mesh = level_mesh(cfg, l);
    const DofMap dofs = make_space(mesh, cfg.pair);
    const ShapeMetrics sm = shape_metrics(mesh);
    int interior_edges = 0;
    for (const Edge& e : mesh.edges) interior_edges += e.boundary ? 0 : 1;
    LevelRow row;
    row.level = l;
    row.h = mesh.h();
    row.dofs = pair_dofs(dofs);
    row.values = {static_cast<double>(mesh.nv()),
                  static_cast<double>(mesh.nc()),
                  static_cast<double>(mesh.ne()),
                  static_cast<double>(interior_edges),
                  th_mesh_ok(mesh) ? 1.0 : 0.0,
                  sm.max_h_over_min_h,
                  sm.max_h_over_min_inradius};
    r.rows.push_back(std::move(row));
  }
  return r;
}

ExperimentResult weights_diag_experiment(const ExperimentConfig& cfg) {
  if (!cfg.weight)
    throw std::invalid_argument("weights-diag requires --weight");
  ExperimentResult r;
  r.name = "weights-diag";
  base_info(r, cfg);
  if (cfg.weight->kind() == WeightSpec::Kind::DistPower) {
    const ApRange range = ap_admissible_range(2, cfg.weight->k_dim(), cfg.p);
    r.info.emplace_back("ap_admissible_lo", fmt(range.lo));
    r.info.emplace_back("ap_admissible_hi", fmt(range.hi));
  }
  r.columns = {"ap_estimate", "restricted_ok", "embed_ratio", "natterer_ratio"};
  const Vec2 center{0.5 * (cfg.domain.x0 + cfg.domain.x1),
                    0.5 * (cfg.domain.y0 + cfg.domain.y1)};
  for (int l = 0; l < cfg.levels; ++l) {
    const Mesh mesh = level_mesh(cfg, l);
    const double h = mesh.h();
    const WeightSpec w = *bind_weight(cfg.weight, h);

    std::vector<Vec2> centers = w.singular_points();
    centers.push_back(center);
    const double ap =
        estimate_ap_constant(w, cfg.p, default_ball_family(cfg.domain, centers, h));
    const bool restricted =
        ap_restricted_check(w, cfg.domain, 0.05 * cfg.domain.diameter());

    double embed = 0.0;
    for (double rr : {2.0 * h, 4.0 * h}) {
      if (4.0 * rr > cfg.domain.diameter()) continue;
      embed = std::max(embed,
                       embedding_condition_ratio(w, cfg.p, center, rr, 2.0 * rr));
    }

    double nat = std::numeric_limits<double>::quiet_NaN();
    if (w.kind() == WeightSpec::Kind::Natterer) {
      const WeightSpec wpow = WeightSpec::power(w, -(2.0 + cfg.lambda));
      double total = 0.0;
      for (int t = 0; t < mesh.nc(); ++t)
        total += weight_measure_cell(wpow, mesh, t, 8, cfg.grading_levels);
      nat = total * std::pow(h, cfg.lambda);
    }

    LevelRow row;
    row.level = l;
    row.h = h;
    row.dofs = pair_dofs(make_space(mesh, cfg.pair));
    row.values = {ap, restricted ? 1.0 : 0.0, embed, nat};
    r.rows.push_back(std::move(row));
  }
  return r;
}

ExperimentResult convergence_experiment(const ExperimentConfig& cfg) {
  ExperimentResult r;
  r.name = "convergence";
  base_info(r, cfg);
  r.columns = {"err_grad", "err_vel", "err_pres"};
  r.eoc_of = {0, 1, 2};
  const ExactSolution ex = manufactured_solution("smooth_curl");
  const int nq = std::max(8, cfg.quad_degree);
  for (int l = 0; l < cfg.levels; ++l) {
    const Mesh mesh = level_mesh(cfg, l);
    const auto w = bind_weight(cfg.weight, mesh.h());
    const SaddleSystem sys = assemble(mesh, cfg.pair);
    const Eigen::VectorXd load = rhs_projection(
        mesh, sys.dofs, ex.gradient, ex.pressure, cfg.quad_degree);
    const Solution sol = solve_saddle(sys, load);
    const DiscreteField f = make_field(mesh, sys.dofs, sol);
    LevelRow row;
    row.level = l;
    row.h = mesh.h();
    row.dofs = pair_dofs(sys.dofs);
    row.values = {err_gradient(ex, f, cfg.p, w, nq),
                  err_velocity(ex, f, cfg.p, w, nq),
                  err_pressure(ex, f, cfg.p, w, nq)};
    r.rows.push_back(std::move(row));
  }
  return r;
}

ExperimentResult stability_experiment(const ExperimentConfig& cfg) {
  stability_gate(cfg);
  ExperimentResult r;
  r.name = "stability";
  base_info(r, cfg);
  r.columns = {"rho", "proj_err", "interp_err", "best_ratio"};
  r.eoc_of = {1, 2};
  const ExactSolution ex = manufactured_solution("smooth_curl");
  const int nq = std::max(8, cfg.quad_degree);
  for (int l = 0; l < cfg.levels; ++l) {
    const Mesh mesh = level_mesh(cfg, l);
    const auto w = bind_weight(cfg.weight, mesh.h());
    const SaddleSystem sys = assemble(mesh, cfg.pair);
    const Eigen::VectorXd load = rhs_projection(
        mesh, sys.dofs, ex.gradient, ex.pressure, cfg.quad_degree);
    const Solution sol = solve_saddle(sys, load);
    const DiscreteField f = make_field(mesh, sys.dofs, sol);

    const double num =
        norm_gradient(f, cfg.p, w, nq) + norm_pressure(f, cfg.p, w, nq);
    const double den = exact_norm_gradient(mesh, ex, cfg.p, w, nq) +
                       exact_norm_pressure(mesh, ex, cfg.p, w, nq);
    const double proj_err = err_gradient(ex, f, cfg.p, w, nq) +
                            err_pressure(ex, f, cfg.p, w, nq);

    // interpolant pair: velocity components through the boundary-aware
    // variant, pressure through the zero-mean variant
    DiscreteField fi;
    fi.mesh = &mesh;
    fi.dofs = sys.dofs;
    fi.vel = Eigen::VectorXd::Zero(sys.dofs.n_velocity());
    for (int c = 0; c < 2; ++c) {
      const auto vv = quasi_interpolate(
          mesh,
          [&](Vec2 x) { return c == 0 ? ex.velocity(x).x : ex.velocity(x).y; },
          InterpVariant::Velocity, cfg.quad_degree, ex.singular);
      const Eigen::VectorXd emb = embed_p1(mesh, sys.dofs, vv);
      for (int s = 0; s < sys.dofs.n_scalar; ++s)
        fi.vel[sys.dofs.velocity_dof(c, s)] = emb[s];
    }
    const auto pv = quasi_interpolate(mesh, ex.pressure, InterpVariant::Pressure,
                                      cfg.quad_degree, ex.singular);
    fi.pr = Eigen::VectorXd::Zero(mesh.nv());
    for (int v = 0; v < mesh.nv(); ++v) fi.pr[v] = pv[v];

    const double interp_err = err_gradient(ex, fi, cfg.p, w, nq) +
                              err_pressure(ex, fi, cfg.p, w, nq);

    LevelRow row;
    row.level = l;
    row.h = mesh.h();
    row.dofs = pair_dofs(sys.dofs);
    row.values = {num / den, proj_err, interp_err, proj_err / interp_err};
    r.rows.push_back(std::move(row));
  }
  return r;
}

ExperimentResult infsup_experiment(const ExperimentConfig& cfg) {
  if (cfg.weight && cfg.p != 2.0)
    throw std::invalid_argument(
        "infsup: the weighted eigenproblem is computed at p = 2 only");
  ExperimentResult r;
  r.name = "infsup";
  base_info(r, cfg);
  r.columns = {"beta"};
  for (int l = 0; l < cfg.levels; ++l) {
    const Mesh mesh = level_mesh(cfg, l);
    if (cfg.pair == PairKind::TaylorHood && !th_mesh_ok(mesh) &&
        !cfg.force_gates)
      throw GateError(
          "infsup gate: a cell has fewer than two interior edges (taylor-hood "
          "needs the edge hypothesis); pass --force-gates to run anyway");
    const auto w = bind_weight(cfg.weight, mesh.h());
    const SaddleSystem sys = assemble(mesh, cfg.pair, w,
                                      AssemblyOptions{cfg.quad_degree,
                                                      cfg.grading_levels});
    LevelRow row;
    row.level = l;
    row.h = mesh.h();
    row.dofs = pair_dofs(sys.dofs);
    row.values = {infsup_beta(sys)};
    r.rows.push_back(std::move(row));
  }
  return r;
}

ExperimentResult dirac_experiment(const ExperimentConfig& cfg) {
  if (!cfg.force_gates && !(cfg.alpha > 0.0 && cfg.alpha < 2.0))
    throw GateError(
        "dirac gate: measurement exponent alpha must lie in (0,2); pass "
        "--force-gates to run anyway");
  ExperimentResult r;
  r.name = "dirac";
  base_info(r, cfg);
  r.info.emplace_back("z", fmt_vec(cfg.z));
  r.info.emplace_back("force", fmt_vec(cfg.force));
  r.info.emplace_back("alpha", fmt(cfg.alpha));
  r.columns = {"err_vel_ref", "grad_w", "pres_w", "grad_unweighted", "omega_h"};
  r.eoc_of = {0};

  const WeightSpec w = WeightSpec::dist_power(cfg.z, cfg.alpha);
  const int nq = std::max(8, cfg.quad_degree);

  // reference two levels beyond the finest level, nested by construction
  const Mesh ref_mesh =
      build_structured_mesh(cfg.pattern, cfg.n0 << (cfg.levels + 1), cfg.domain);
  const SaddleSystem ref_sys = assemble(ref_mesh, cfg.pair);
  const Solution ref_sol = solve_saddle(
      ref_sys, rhs_dirac(ref_mesh, ref_sys.dofs, cfg.z, cfg.force));
  const DiscreteField ref_f = make_field(ref_mesh, ref_sys.dofs, ref_sol);

  for (int l = 0; l < cfg.levels; ++l) {
    const Mesh mesh = level_mesh(cfg, l);
    const SaddleSystem sys = assemble(mesh, cfg.pair);
    const Solution sol =
        solve_saddle(sys, rhs_dirac(mesh, sys.dofs, cfg.z, cfg.force));
    const DiscreteField f = make_field(mesh, sys.dofs, sol);

    double omega_h = 0.0;
    for (int t = 0; t < mesh.nc(); ++t)
      omega_h = std::max(omega_h, weight_measure_cell(w, mesh, t, 6,
                                                      cfg.grading_levels));

    LevelRow row;
    row.level = l;
    row.h = mesh.h();
    row.dofs = pair_dofs(sys.dofs);
    row.values = {cross_err_velocity_l2(ref_f, f, nq),
                  norm_gradient(f, cfg.p, w, nq),
                  norm_pressure(f, cfg.p, w, nq),
                  norm_gradient(f, 2.0, std::nullopt, nq), omega_h};
    r.rows.push_back(std::move(row));
  }
  return r;
}

ExperimentResult green_experiment(const ExperimentConfig& cfg) {
  if (!cfg.force_gates) {
    if (!(cfg.lambda > 0.0 && cfg.lambda <= 0.2))
      throw GateError(
          "green gate: decay exponent lambda must lie in (0, 0.2]; pass "
          "--force-gates to run anyway");
    if (!(cfg.kappa > 1.0))
      throw GateError(
          "green gate: kappa must exceed 1; pass --force-gates to run anyway");
    const double h0 = cfg.domain.width() / cfg.n0;
    if (cfg.kappa * h0 > cfg.domain.diameter())
      throw GateError(
          "green gate: kappa * h exceeds the domain diameter; refine or "
          "reduce kappa; pass --force-gates to run anyway");
  }
  ExperimentResult r;
  r.name = "green";
  base_info(r, cfg);
  r.info.emplace_back("z", fmt_vec(cfg.z));
  r.info.emplace_back("kappa", fmt(cfg.kappa));
  r.info.emplace_back("lambda", fmt(cfg.lambda));
  r.info.emplace_back("deriv_i", std::to_string(cfg.deriv_i));
  r.info.emplace_back("deriv_j", std::to_string(cfg.deriv_j));
  r.columns = {"q_sigma", "q_plain", "delta_sup_h2"};
  const int nq = std::max(8, cfg.quad_degree);

  for (int l = 0; l < cfg.levels; ++l) {
    const Mesh mesh = level_mesh(cfg, l);
    const Mesh ref_mesh = build_structured_mesh(
        cfg.pattern, (cfg.n0 << l) * 4, cfg.domain);
    const double h = mesh.h();

    // anchor z at the barycenter of its cell so the support triangle is
    // identical for the level solve and the nested reference solve
    const Vec2 zl = mesh.barycenter(locate_point(mesh, cfg.z));
    const RegularizedDelta delta =
        build_regularized_delta(mesh, cfg.pair, zl);

    const SaddleSystem sys = assemble(mesh, cfg.pair);
    const SaddleSolver solver(sys);
    const Solution gh =
        solve_green(mesh, solver, delta, cfg.deriv_i, cfg.deriv_j);
    const SaddleSystem ref_sys = assemble(ref_mesh, cfg.pair);
    const SaddleSolver ref_solver(ref_sys);
    const Solution gref =
        solve_green(ref_mesh, ref_solver, delta, cfg.deriv_i, cfg.deriv_j);

    const DiscreteField fh = make_field(mesh, sys.dofs, gh);
    const DiscreteField fref = make_field(ref_mesh, ref_sys.dofs, gref);

    const WeightSpec sigma_mu = WeightSpec::power(
        WeightSpec::natterer(zl, cfg.kappa, h), 2.0 + cfg.lambda);
    const double hl = std::pow(h, 0.5 * cfg.lambda);
    const double q_sigma =
        cross_err_gradient(fref, fh, 2.0, sigma_mu, nq) / hl;
    const double q_plain =
        cross_err_gradient(fref, fh, 2.0, std::nullopt, nq) / hl;

    // sup of the regularized delta, rescaled by h^2 (bounded by design)
    double dsup = 0.0;
    const QuadRule& rs = triangle_rule(10);
    for (std::size_t q = 0; q < rs.points.size(); ++q) {
      Vec2 x{0, 0};
      for (int k = 0; k < 3; ++k)
        x = x + delta.tri[k] * rs.points[q][k];
      dsup = std::max(dsup, std::abs(delta.eval(x)));
    }

    LevelRow row;
    row.level = l;
    row.h = h;
    row.dofs = pair_dofs(sys.dofs);
    row.values = {q_sigma, q_plain, dsup * h * h};
    r.rows.push_back(std::move(row));
  }
  return r;
}

double stability_self_consistency(const ExperimentConfig& cfg, int n) {
  const Mesh mesh = build_structured_mesh(cfg.pattern, n, cfg.domain);
  const auto w = bind_weight(cfg.weight, mesh.h());
  const ExactSolution ex = manufactured_solution("smooth_curl");
  const SaddleSystem sys = assemble(mesh, cfg.pair);
  const SaddleSolver solver(sys);
  const int nq = std::max(8, cfg.quad_degree);

  const Solution first = solver.solve(rhs_projection(
      mesh, sys.dofs, ex.gradient, ex.pressure, cfg.quad_degree));
  const DiscreteField f1 = make_field(mesh, sys.dofs, first);

  const Solution second = solver.solve(rhs_projection(
      mesh, sys.dofs,
      [&](Vec2 x) { return f1.gradient(x); },
      [&](Vec2 x) { return f1.pressure(x); }, cfg.quad_degree));
  const DiscreteField f2 = make_field(mesh, sys.dofs, second);

  const double num =
      norm_gradient(f2, cfg.p, w, nq) + norm_pressure(f2, cfg.p, w, nq);
  const double den =
      norm_gradient(f1, cfg.p, w, nq) + norm_pressure(f1, cfg.p, w, nq);
  return num / den;
}

}  // namespace stokeslab
