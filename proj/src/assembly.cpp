#include "stokeslab/assembly.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "stokeslab/quadrature.hpp"

namespace stokeslab {

namespace {

using Triplet = Eigen::Triplet<double>;

// moment basis for the regularized delta: the local velocity functions plus,
// for the mini pair, the bubble derivatives (the P2 basis is already closed
// under the first derivatives of its members that the identity needs).
// Derivative entries are scaled by the cell diameter to keep the Gram matrix
// well conditioned; the span is unchanged.
struct LocalTri {
  std::array<Vec2, 3> v;
  double area;
  double diam;
  std::array<Vec2, 3> grad;  // barycentric gradients

  explicit LocalTri(const std::array<Vec2, 3>& tri) : v(tri) {
    const Vec2 e1 = v[1] - v[0], e2 = v[2] - v[0];
    area = 0.5 * cross(e1, e2);
    diam = std::max({dist(v[0], v[1]), dist(v[1], v[2]), dist(v[2], v[0])});
    const double inv2a = 1.0 / (2.0 * area);
    grad[0] = Vec2{(v[1].y - v[2].y) * inv2a, (v[2].x - v[1].x) * inv2a};
    grad[1] = Vec2{(v[2].y - v[0].y) * inv2a, (v[0].x - v[2].x) * inv2a};
    grad[2] = Vec2{(v[0].y - v[1].y) * inv2a, (v[1].x - v[0].x) * inv2a};
  }

  std::array<double, 3> bary(Vec2 x) const {
    std::array<double, 3> l;
    l[1] = cross(x - v[0], v[2] - v[0]) / (2.0 * area);
    l[2] = cross(v[1] - v[0], x - v[0]) / (2.0 * area);
    l[0] = 1.0 - l[1] - l[2];
    return l;
  }
};

int moment_dim(PairKind) { return 6; }

void moment_basis(PairKind kind, const LocalTri& t, Vec2 x, double* out) {
  const auto l = t.bary(x);
  if (kind == PairKind::Mini) {
    const double b = 27.0 * l[0] * l[1] * l[2];
    const Vec2 gb = (t.grad[0] * (l[1] * l[2]) + t.grad[1] * (l[0] * l[2]) +
                     t.grad[2] * (l[0] * l[1])) *
                    27.0;
    out[0] = l[0];
    out[1] = l[1];
    out[2] = l[2];
    out[3] = b;
    out[4] = t.diam * gb.x;
    out[5] = t.diam * gb.y;
  } else {
    out[0] = l[0] * (2.0 * l[0] - 1.0);
    out[1] = l[1] * (2.0 * l[1] - 1.0);
    out[2] = l[2] * (2.0 * l[2] - 1.0);
    out[3] = 4.0 * l[1] * l[2];
    out[4] = 4.0 * l[2] * l[0];
    out[5] = 4.0 * l[0] * l[1];
  }
}

double delta_bubble(const LocalTri& t, Vec2 x) {
  const auto l = t.bary(x);
  return 27.0 * l[0] * l[1] * l[2];
}

}  // namespace

SaddleSystem assemble(const Mesh& mesh, PairKind kind,
                      const std::optional<WeightSpec>& weight,
                      const AssemblyOptions& opt) {
  SaddleSystem sys;
  sys.dofs = make_space(mesh, kind);
  const DofMap& dofs = sys.dofs;
  const int nis = dofs.n_interior_scalar;
  const int np = dofs.n_pressure;
  const QuadRule& rule = triangle_rule(opt.quad_degree);

  std::optional<WeightSpec> wc;
  std::vector<Vec2> sing;
  if (weight) {
    sys.has_weight = true;
    wc = WeightSpec::conjugate(*weight, 2.0);
    sing = weight->singular_points();
  }

  std::vector<Triplet> ta, tb, tm, ta_w, ta_wc, tm_w, tm_wc;
  ta.reserve(mesh.nc() * 36);
  tb.reserve(mesh.nc() * 36);
  tm.reserve(mesh.nc() * 9);
  sys.mean = Eigen::VectorXd::Zero(np);

  GradedOptions gopt;
  gopt.levels = opt.grading_levels;
  gopt.check_divergence = true;

  for (int t = 0; t < mesh.nc(); ++t) {
    sys.domain_area += mesh.cell_area(t);
    const double area = mesh.cell_area(t);

    // global scalar dofs and their interior indices for this cell
    int gdof[6], idx[6];
    const int nloc = dofs.dofs_per_cell;
    for (int k = 0; k < nloc; ++k) {
      gdof[k] = cell_scalar_dof(mesh, dofs, t, k);
      idx[k] = dofs.interior_index[gdof[k]];
    }
    const auto& tri = mesh.cells[t];

    // plain blocks with the reference rule: all integrands are polynomial
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double w = area * rule.weights[q];
      const BasisEval bv = eval_velocity_basis(mesh, kind, t, rule.points[q]);
      const auto& lam = rule.points[q];
      for (int i = 0; i < nloc; ++i) {
        if (idx[i] < 0) continue;
        for (int j = 0; j < nloc; ++j) {
          if (idx[j] < 0) continue;
          const double a = w * dot(bv.grad[i], bv.grad[j]);
          ta.emplace_back(idx[i], idx[j], a);
          ta.emplace_back(nis + idx[i], nis + idx[j], a);
        }
      }
      for (int pi = 0; pi < 3; ++pi) {
        const double qp = w * lam[pi];
        for (int j = 0; j < nloc; ++j) {
          if (idx[j] < 0) continue;
          tb.emplace_back(tri[pi], idx[j], -qp * bv.grad[j].x);
          tb.emplace_back(tri[pi], nis + idx[j], -qp * bv.grad[j].y);
        }
        for (int pj = 0; pj < 3; ++pj)
          tm.emplace_back(tri[pi], tri[pj], w * lam[pi] * lam[pj]);
      }
    }
    for (int pi = 0; pi < 3; ++pi) sys.mean[tri[pi]] += area / 3.0;

    if (!weight) continue;

    // weighted blocks: graded points near weight singularities, otherwise
    // the same reference rule mapped to the cell
    const auto pts = cell_quadrature_points(mesh, t, rule, sing, gopt);
    for (const auto& qp : pts) {
      const double wv = weight->eval(qp.x);
      const double wcv = wc->eval(qp.x);
      const auto lam = mesh.barycentric(t, qp.x);
      const BasisEval bv = eval_velocity_basis(mesh, kind, t, lam);
      for (int i = 0; i < nloc; ++i) {
        if (idx[i] < 0) continue;
        for (int j = 0; j < nloc; ++j) {
          if (idx[j] < 0) continue;
          const double g = dot(bv.grad[i], bv.grad[j]);
          ta_w.emplace_back(idx[i], idx[j], qp.w * wv * g);
          ta_w.emplace_back(nis + idx[i], nis + idx[j], qp.w * wv * g);
          ta_wc.emplace_back(idx[i], idx[j], qp.w * wcv * g);
          ta_wc.emplace_back(nis + idx[i], nis + idx[j], qp.w * wcv * g);
        }
      }
      for (int pi = 0; pi < 3; ++pi)
        for (int pj = 0; pj < 3; ++pj) {
          const double mm = qp.w * lam[pi] * lam[pj];
          tm_w.emplace_back(tri[pi], tri[pj], mm * wv);
          tm_wc.emplace_back(tri[pi], tri[pj], mm * wcv);
        }
    }
  }

  const int nu = 2 * nis;
  sys.A.resize(nu, nu);
  sys.A.setFromTriplets(ta.begin(), ta.end());
  sys.B.resize(np, nu);
  sys.B.setFromTriplets(tb.begin(), tb.end());
  sys.M.resize(np, np);
  sys.M.setFromTriplets(tm.begin(), tm.end());
  if (weight) {
    sys.A_w.resize(nu, nu);
    sys.A_w.setFromTriplets(ta_w.begin(), ta_w.end());
    sys.A_wc.resize(nu, nu);
    sys.A_wc.setFromTriplets(ta_wc.begin(), ta_wc.end());
    sys.M_w.resize(np, np);
    sys.M_w.setFromTriplets(tm_w.begin(), tm_w.end());
    sys.M_wc.resize(np, np);
    sys.M_wc.setFromTriplets(tm_wc.begin(), tm_wc.end());
  }
  return sys;
}

Eigen::VectorXd rhs_regular(const Mesh& mesh, const DofMap& dofs,
                            const VectorField& f, int quad_degree) {
  const QuadRule& rule = triangle_rule(quad_degree);
  Eigen::VectorXd load = Eigen::VectorXd::Zero(2 * dofs.n_interior_scalar);
  const int nis = dofs.n_interior_scalar;
  for (int t = 0; t < mesh.nc(); ++t) {
    const double area = mesh.cell_area(t);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double w = area * rule.weights[q];
      const BasisEval bv =
          eval_velocity_basis(mesh, dofs.kind, t, rule.points[q]);
      Vec2 x{0, 0};
      for (int k = 0; k < 3; ++k)
        x = x + mesh.verts[mesh.cells[t][k]] * rule.points[q][k];
      const Vec2 fx = f(x);
      for (int k = 0; k < dofs.dofs_per_cell; ++k) {
        const int idx = dofs.interior_index[cell_scalar_dof(mesh, dofs, t, k)];
        if (idx < 0) continue;
        load[idx] += w * fx.x * bv.val[k];
        load[nis + idx] += w * fx.y * bv.val[k];
      }
    }
  }
  return load;
}

Eigen::VectorXd rhs_dirac(const Mesh& mesh, const DofMap& dofs, Vec2 z,
                          Vec2 F) {
  const int cell = locate_point(mesh, z);
  const auto lam = mesh.barycentric(cell, z);
  const BasisEval bv = eval_velocity_basis(mesh, dofs.kind, cell, lam);
  Eigen::VectorXd load = Eigen::VectorXd::Zero(2 * dofs.n_interior_scalar);
  const int nis = dofs.n_interior_scalar;
  for (int k = 0; k < dofs.dofs_per_cell; ++k) {
    const int idx = dofs.interior_index[cell_scalar_dof(mesh, dofs, cell, k)];
    if (idx < 0) continue;
    load[idx] += F.x * bv.val[k];
    load[nis + idx] += F.y * bv.val[k];
  }
  return load;
}

Eigen::VectorXd rhs_projection(const Mesh& mesh, const DofMap& dofs,
                               const GradField& grad_u,
                               const ScalarField& pressure, int quad_degree,
                               const std::vector<Vec2>& singular,
                               int grading_levels) {
  const QuadRule& rule = triangle_rule(quad_degree);
  GradedOptions gopt;
  gopt.levels = grading_levels;
  gopt.check_divergence = true;
  Eigen::VectorXd load = Eigen::VectorXd::Zero(2 * dofs.n_interior_scalar);
  const int nis = dofs.n_interior_scalar;
  for (int t = 0; t < mesh.nc(); ++t) {
    const auto pts = cell_quadrature_points(mesh, t, rule, singular, gopt);
    for (const auto& qp : pts) {
      const auto lam = mesh.barycentric(t, qp.x);
      const BasisEval bv = eval_velocity_basis(mesh, dofs.kind, t, lam);
      const auto gu = grad_u(qp.x);
      const double pv = pressure(qp.x);
      for (int k = 0; k < dofs.dofs_per_cell; ++k) {
        const int idx = dofs.interior_index[cell_scalar_dof(mesh, dofs, t, k)];
        if (idx < 0) continue;
        load[idx] += qp.w * (dot(gu[0], bv.grad[k]) - pv * bv.grad[k].x);
        load[nis + idx] += qp.w * (dot(gu[1], bv.grad[k]) - pv * bv.grad[k].y);
      }
    }
  }
  return load;
}

double RegularizedDelta::eval(Vec2 x) const {
  const LocalTri t(tri);
  const auto l = t.bary(x);
  const double tol = -1e-12;
  if (l[0] < tol || l[1] < tol || l[2] < tol) return 0.0;
  const int m = moment_dim(kind);
  double psi[6];
  moment_basis(kind, t, x, psi);
  double q = 0.0;
  for (int k = 0; k < m; ++k) q += coeffs[k] * psi[k];
  const double b = delta_bubble(t, x);
  return b * b * q;
}

double RegularizedDelta::moment_residual() const {
  const LocalTri t(tri);
  const int m = moment_dim(kind);
  const QuadRule& rule = triangle_rule(16);
  Eigen::VectorXd mom = Eigen::VectorXd::Zero(m);
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    Vec2 x{0, 0};
    for (int k = 0; k < 3; ++k) x = x + t.v[k] * rule.points[q][k];
    double psi[6];
    moment_basis(kind, t, x, psi);
    const double d = eval(x) * t.area * rule.weights[q];
    for (int k = 0; k < m; ++k) mom[k] += d * psi[k];
  }
  double psi_z[6];
  moment_basis(kind, t, z, psi_z);
  double r = 0.0;
  for (int k = 0; k < m; ++k) r = std::max(r, std::abs(mom[k] - psi_z[k]));
  return r;
}

RegularizedDelta build_regularized_delta(const Mesh& mesh, PairKind kind,
                                         Vec2 z) {
  RegularizedDelta d;
  d.kind = kind;
  d.cell = locate_point(mesh, z);
  d.z = z;
  for (int k = 0; k < 3; ++k) d.tri[k] = mesh.verts[mesh.cells[d.cell][k]];
  const LocalTri t(d.tri);
  const int m = moment_dim(kind);
  const QuadRule& rule = triangle_rule(14);

  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    Vec2 x{0, 0};
    for (int k = 0; k < 3; ++k) x = x + t.v[k] * rule.points[q][k];
    double psi[6];
    moment_basis(kind, t, x, psi);
    const double b = delta_bubble(t, x);
    const double w = t.area * rule.weights[q] * b * b;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) G(i, j) += w * psi[i] * psi[j];
  }
  Eigen::VectorXd rhs(m);
  double psi_z[6];
  moment_basis(kind, t, z, psi_z);
  for (int k = 0; k < m; ++k) rhs[k] = psi_z[k];

  Eigen::LDLT<Eigen::MatrixXd> ldlt(G);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("regularized delta: singular moment system");
  d.coeffs = ldlt.solve(rhs);
  return d;
}

Eigen::VectorXd rhs_green(const Mesh& mesh, const DofMap& dofs,
                          const RegularizedDelta& delta, int i, int j) {
  if (i < 0 || i > 1 || j < 0 || j > 1)
    throw std::invalid_argument("rhs_green: component out of range");
  const LocalTri host(delta.tri);
  const QuadRule& rule = triangle_rule(12);
  Eigen::VectorXd load = Eigen::VectorXd::Zero(2 * dofs.n_interior_scalar);
  const int nis = dofs.n_interior_scalar;
  for (int t = 0; t < mesh.nc(); ++t) {
    const auto lb = host.bary(mesh.barycenter(t));
    if (lb[0] < -1e-12 || lb[1] < -1e-12 || lb[2] < -1e-12) continue;
    const double area = mesh.cell_area(t);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      Vec2 x{0, 0};
      for (int k = 0; k < 3; ++k)
        x = x + mesh.verts[mesh.cells[t][k]] * rule.points[q][k];
      const double d = delta.eval(x);
      if (d == 0.0) continue;
      const double w = area * rule.weights[q] * d;
      const BasisEval bv =
          eval_velocity_basis(mesh, dofs.kind, t, rule.points[q]);
      for (int k = 0; k < dofs.dofs_per_cell; ++k) {
        const int idx = dofs.interior_index[cell_scalar_dof(mesh, dofs, t, k)];
        if (idx < 0) continue;
        const double g = (i == 0) ? bv.grad[k].x : bv.grad[k].y;
        load[(j == 0 ? idx : nis + idx)] += w * g;
      }
    }
  }
  return load;
}

}  // namespace stokeslab
