#include "stokeslab/approximation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stokeslab/integrate.hpp"
#include "stokeslab/quadrature.hpp"

namespace stokeslab {

namespace {

GradedOptions graded_opts(int levels) {
  GradedOptions opt;
  opt.levels = levels;
  opt.check_divergence = false;
  return opt;
}

// P1 interpolant value and (cellwise constant) gradient on one cell
double p1_value(const Mesh& mesh, const std::vector<double>& vv, int cell,
                const std::array<double, 3>& lam) {
  const auto& tri = mesh.cells[cell];
  return vv[tri[0]] * lam[0] + vv[tri[1]] * lam[1] + vv[tri[2]] * lam[2];
}

Vec2 p1_gradient(const Mesh& mesh, const std::vector<double>& vv, int cell) {
  const auto& tri = mesh.cells[cell];
  const Vec2 a = mesh.verts[tri[0]], b = mesh.verts[tri[1]],
             c = mesh.verts[tri[2]];
  const double inv2a = 1.0 / (2.0 * mesh.cell_area(cell));
  const Vec2 ga{(b.y - c.y) * inv2a, (c.x - b.x) * inv2a};
  const Vec2 gb{(c.y - a.y) * inv2a, (a.x - c.x) * inv2a};
  const Vec2 gc{(a.y - b.y) * inv2a, (b.x - a.x) * inv2a};
  return ga * vv[tri[0]] + gb * vv[tri[1]] + gc * vv[tri[2]];
}

}  // namespace

std::vector<double> quasi_interpolate(const Mesh& mesh, const ScalarField& f,
                                      InterpVariant variant, int quad_degree,
                                      const std::vector<Vec2>& singular) {
  const QuadRule& rule = triangle_rule(quad_degree);
  std::vector<double> cell_int(mesh.nc());
  for (int t = 0; t < mesh.nc(); ++t)
    cell_int[t] =
        integrate_cell_graded(mesh, t, f, rule, singular, graded_opts(8));

  std::vector<double> vv(mesh.nv(), 0.0);
  for (int v = 0; v < mesh.nv(); ++v) {
    double num = 0.0, den = 0.0;
    for (int t : mesh.vert_cells[v]) {
      num += cell_int[t];
      den += mesh.cell_area(t);
    }
    vv[v] = num / den;
  }

  if (variant == InterpVariant::Velocity) {
    for (int v = 0; v < mesh.nv(); ++v)
      if (mesh.vert_boundary[v]) vv[v] = 0.0;
  } else if (variant == InterpVariant::Pressure) {
    double mean = 0.0, area = 0.0;
    for (int t = 0; t < mesh.nc(); ++t) {
      const auto& tri = mesh.cells[t];
      mean += mesh.cell_area(t) * (vv[tri[0]] + vv[tri[1]] + vv[tri[2]]) / 3.0;
      area += mesh.cell_area(t);
    }
    const double shift = mean / area;
    for (double& x : vv) x -= shift;
  }
  return vv;
}

Eigen::VectorXd embed_p1(const Mesh& mesh, const DofMap& dofs,
                         const std::vector<double>& vertex_values) {
  if (static_cast<int>(vertex_values.size()) != mesh.nv())
    throw std::invalid_argument("embed_p1: vertex value count mismatch");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(dofs.n_scalar);
  for (int v = 0; v < mesh.nv(); ++v) c[v] = vertex_values[v];
  if (dofs.kind == PairKind::TaylorHood) {
    for (int e = 0; e < mesh.ne(); ++e) {
      const Edge& ed = mesh.edges[e];
      c[mesh.nv() + e] = 0.5 * (vertex_values[ed.a] + vertex_values[ed.b]);
    }
  }
  return c;
}

InterpReport interp_estimates_report(const Mesh& mesh, const ScalarField& f,
                                     const std::function<Vec2(Vec2)>& grad_f,
                                     const std::optional<WeightSpec>& weight,
                                     double p, int quad_degree,
                                     const std::vector<Vec2>& singular) {
  std::vector<Vec2> sing = singular;
  if (weight) {
    auto ws = weight->singular_points();
    sing.insert(sing.end(), ws.begin(), ws.end());
  }
  const std::vector<double> vv =
      quasi_interpolate(mesh, f, InterpVariant::Plain, quad_degree, singular);
  const QuadRule& rule = triangle_rule(quad_degree);
  const auto opt = graded_opts(8);

  auto wval = [&](Vec2 x) { return weight ? weight->eval(x) : 1.0; };

  // per-cell weighted integrals of |grad f|^p, |f - Pi f|^p (weighted and
  // plain), and the weight itself
  std::vector<double> grad_p(mesh.nc()), err_p(mesh.nc()),
      err_plain(mesh.nc()), wmass(mesh.nc());
  for (int t = 0; t < mesh.nc(); ++t) {
    grad_p[t] = integrate_cell_graded(
        mesh, t, [&](Vec2 x) { return wval(x) * std::pow(norm(grad_f(x)), p); },
        rule, sing, opt);
    err_p[t] = integrate_cell_graded(
        mesh, t,
        [&](Vec2 x) {
          const double d = f(x) - p1_value(mesh, vv, t, mesh.barycentric(t, x));
          return wval(x) * std::pow(std::abs(d), p);
        },
        rule, sing, opt);
    err_plain[t] = integrate_cell_graded(
        mesh, t,
        [&](Vec2 x) {
          const double d = f(x) - p1_value(mesh, vv, t, mesh.barycentric(t, x));
          return std::pow(std::abs(d), p);
        },
        rule, sing, opt);
    wmass[t] = weight ? weight_measure_cell(*weight, mesh, t, quad_degree)
                      : mesh.cell_area(t);
  }

  InterpReport rep;
  double err_total = 0.0;
  for (int t = 0; t < mesh.nc(); ++t) {
    err_total += err_p[t];
    double star_grad = 0.0, star_w = 0.0;
    std::vector<int> star;
    for (int k = 0; k < 3; ++k)
      for (int s : mesh.vert_cells[mesh.cells[t][k]])
        if (std::find(star.begin(), star.end(), s) == star.end())
          star.push_back(s);
    for (int s : star) {
      star_grad += grad_p[s];
      star_w += wmass[s];
    }
    if (star_grad <= 0.0) continue;
    const double h_t = mesh.cell_diameter(t);
    const double gnorm = std::pow(star_grad, 1.0 / p);
    const Vec2 gpi = p1_gradient(mesh, vv, t);
    const double c_stab = std::pow(wmass[t], 1.0 / p) * norm(gpi) / gnorm;
    const double c_err = std::pow(err_p[t], 1.0 / p) / (h_t * gnorm);
    const double mixed = std::pow(err_plain[t], 1.0 / p) /
                         (std::pow(h_t, 1.0 + 2.0 / p) *
                          std::pow(star_w, -1.0 / p) * gnorm);
    rep.c_stab_max = std::max(rep.c_stab_max, c_stab);
    rep.c_err_max = std::max(rep.c_err_max, c_err);
    rep.mixed_max = std::max(rep.mixed_max, mixed);
    const auto& tri = mesh.cells[t];
    const bool interior = !mesh.vert_boundary[tri[0]] &&
                          !mesh.vert_boundary[tri[1]] &&
                          !mesh.vert_boundary[tri[2]];
    if (interior) {
      rep.c_stab_interior = std::max(rep.c_stab_interior, c_stab);
      rep.c_err_interior = std::max(rep.c_err_interior, c_err);
    }
  }
  rep.err_lp = std::pow(err_total, 1.0 / p);
  return rep;
}

Eigen::VectorXd fortin_mini(const Mesh& mesh, const DofMap& dofs,
                            const VectorField& v, int quad_degree,
                            const std::vector<Vec2>& singular) {
  if (dofs.kind != PairKind::Mini)
    throw std::invalid_argument("fortin_mini: mini pair required");
  const QuadRule& rule = triangle_rule(quad_degree);
  const auto opt = graded_opts(8);

  std::array<std::vector<double>, 2> vv;
  for (int c = 0; c < 2; ++c)
    vv[c] = quasi_interpolate(
        mesh, [&](Vec2 x) { return c == 0 ? v(x).x : v(x).y; },
        InterpVariant::Velocity, quad_degree, singular);

  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(dofs.n_velocity());
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < mesh.nv(); ++i)
      coeffs[dofs.velocity_dof(c, i)] = vv[c][i];

  for (int t = 0; t < mesh.nc(); ++t) {
    const double bub = bubble_cell_integral(mesh, t);
    const auto& tri = mesh.cells[t];
    for (int c = 0; c < 2; ++c) {
      const double int_v = integrate_cell_graded(
          mesh, t, [&](Vec2 x) { return c == 0 ? v(x).x : v(x).y; }, rule,
          singular, opt);
      const double int_pi = mesh.cell_area(t) *
                            (vv[c][tri[0]] + vv[c][tri[1]] + vv[c][tri[2]]) /
                            3.0;
      coeffs[dofs.velocity_dof(c, mesh.nv() + t)] = (int_v - int_pi) / bub;
    }
  }
  return coeffs;
}

Eigen::VectorXd th_perturbation_field(const Mesh& mesh, const DofMap& dofs,
                                      const Eigen::VectorXd& q,
                                      const WeightSpec& weight, double p,
                                      int grading_levels) {
  if (dofs.kind != PairKind::TaylorHood)
    throw std::invalid_argument("th_perturbation_field: taylor-hood required");
  if (!th_mesh_ok(mesh))
    throw std::domain_error(
        "th_perturbation_field: a cell has fewer than two interior edges");
  if (q.size() != mesh.nv())
    throw std::invalid_argument("th_perturbation_field: pressure size");
  const double pc = p / (p - 1.0);
  const WeightSpec wc = WeightSpec::conjugate(weight, p);

  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(dofs.n_velocity());
  for (int e = 0; e < mesh.ne(); ++e) {
    const Edge& ed = mesh.edges[e];
    if (ed.boundary) continue;
    const Vec2 a = mesh.verts[ed.a], b = mesh.verts[ed.b];
    const double len = dist(a, b);
    const Vec2 tau = (b - a) * (1.0 / len);
    const double dq = (q[ed.b] - q[ed.a]) / len;
    if (dq == 0.0) continue;
    const int cell = std::min(ed.cell[0], ed.cell[1]);
    const double wmass =
        weight_measure_cell(wc, mesh, cell, 6, grading_levels);
    const double mag = std::pow(len, pc) * std::pow(std::abs(dq), pc - 1.0) *
                       wmass / mesh.cell_area(cell);
    const Vec2 val = tau * (dq > 0 ? -mag : mag);
    coeffs[dofs.velocity_dof(0, mesh.nv() + e)] = val.x;
    coeffs[dofs.velocity_dof(1, mesh.nv() + e)] = val.y;
  }
  return coeffs;
}

}  // namespace stokeslab
