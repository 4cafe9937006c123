#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "doctest.h"
#include "stokeslab/assembly.hpp"
#include "stokeslab/fem_spaces.hpp"
#include "stokeslab/mesh.hpp"
#include "stokeslab/quadrature.hpp"

using namespace stokeslab;

namespace {

// evaluate a discrete velocity component from its scalar coefficient vector
double eval_component(const Mesh& mesh, const DofMap& dofs,
                      const Eigen::VectorXd& coeff, int cell,
                      const std::array<double, 3>& lam) {
  const BasisEval at = eval_velocity_basis(mesh, dofs.kind, cell, lam);
  double v = 0.0;
  for (int k = 0; k < at.n; ++k)
    v += coeff[cell_scalar_dof(mesh, dofs, cell, k)] * at.val[k];
  return v;
}

Vec2 eval_component_grad(const Mesh& mesh, const DofMap& dofs,
                         const Eigen::VectorXd& coeff, int cell,
                         const std::array<double, 3>& lam) {
  const BasisEval at = eval_velocity_basis(mesh, dofs.kind, cell, lam);
  Vec2 g{0, 0};
  for (int k = 0; k < at.n; ++k)
    g = g + coeff[cell_scalar_dof(mesh, dofs, cell, k)] * at.grad[k];
  return g;
}

// scatter a full scalar coefficient vector (one per scalar dof, zero on the
// boundary) into the interior-velocity layout for one component
Eigen::VectorXd interior_component(const DofMap& dofs,
                                   const Eigen::VectorXd& full, int comp) {
  Eigen::VectorXd out =
      Eigen::VectorXd::Zero(dofs.n_interior_velocity());
  for (int s = 0; s < dofs.n_scalar; ++s) {
    const int i = dofs.interior_index[s];
    if (i >= 0) out[comp * dofs.n_interior_scalar + i] = full[s];
  }
  return out;
}

Eigen::VectorXd random_interior(const DofMap& dofs, std::mt19937& gen) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXd v(dofs.n_interior_velocity());
  for (int i = 0; i < v.size(); ++i) v[i] = g(gen);
  return v;
}

// expand one velocity component of an interior vector to scalar-dof layout
Eigen::VectorXd expand_component(const DofMap& dofs,
                                 const Eigen::VectorXd& interior, int comp) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dofs.n_scalar);
  for (int i = 0; i < dofs.n_interior_scalar; ++i)
    out[dofs.interior_scalars[i]] =
        interior[comp * dofs.n_interior_scalar + i];
  return out;
}

}  // namespace

TEST_CASE("system dimensions and symmetry") {
  const Mesh mesh = build_structured_mesh(Pattern::CrissCross, 3);
  for (PairKind kind : {PairKind::Mini, PairKind::TaylorHood}) {
    const SaddleSystem sys = assemble(mesh, kind);
    const int nu = sys.dofs.n_interior_velocity();
    CHECK(sys.A.rows() == nu);
    CHECK(sys.A.cols() == nu);
    CHECK(sys.B.rows() == sys.dofs.n_pressure);
    CHECK(sys.B.cols() == nu);
    CHECK(sys.M.rows() == sys.dofs.n_pressure);
    CHECK(sys.mean.size() == sys.dofs.n_pressure);
    CHECK(sys.domain_area == doctest::Approx(1.0).epsilon(1e-13));
    CHECK_FALSE(sys.has_weight);

    const SpMat At = SpMat(sys.A.transpose());
    CHECK((At - sys.A).norm() < 1e-12);
    const SpMat Mt = SpMat(sys.M.transpose());
    CHECK((Mt - sys.M).norm() < 1e-12);
  }
}

TEST_CASE("stiffness is positive definite on interior dofs") {
  const Mesh mesh = build_structured_mesh(Pattern::RightDiagonal, 3);
  const SaddleSystem sys = assemble(mesh, PairKind::Mini);
  std::mt19937 gen(5);
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::VectorXd v = random_interior(sys.dofs, gen);
    CHECK(v.dot(sys.A * v) > 1e-10 * v.squaredNorm());
  }
}

TEST_CASE("mean vector is the mass matrix applied to constants") {
  const Mesh mesh = build_structured_mesh(Pattern::CrissCross, 2);
  const SaddleSystem sys = assemble(mesh, PairKind::TaylorHood);
  const Eigen::VectorXd ones =
      Eigen::VectorXd::Ones(sys.dofs.n_pressure);
  CHECK((sys.M * ones - sys.mean).norm() < 1e-13);
  CHECK(sys.mean.sum() == doctest::Approx(sys.domain_area).epsilon(1e-13));
}

TEST_CASE("constant pressures annihilate divergence rows") {
  // b(v, 1) = -int div v = 0 for zero-trace v, so 1^T B = 0 columnwise
  const Mesh mesh = build_structured_mesh(Pattern::CrissCross, 3);
  for (PairKind kind : {PairKind::Mini, PairKind::TaylorHood}) {
    const SaddleSystem sys = assemble(mesh, kind);
    const Eigen::VectorXd colsum =
        Eigen::VectorXd::Ones(sys.B.rows()).transpose() * sys.B;
    CHECK(colsum.lpNorm<Eigen::Infinity>() < 1e-12);
  }
}

TEST_CASE("divergence block against direct quadrature") {
  const Mesh mesh = build_structured_mesh(Pattern::RightDiagonal, 2);
  const SaddleSystem sys = assemble(mesh, PairKind::TaylorHood);
  const DofMap& dofs = sys.dofs;
  std::mt19937 gen(17);
  for (int rep = 0; rep < 5; ++rep) {
    const Eigen::VectorXd v = random_interior(dofs, gen);
    const Eigen::VectorXd vx = expand_component(dofs, v, 0);
    const Eigen::VectorXd vy = expand_component(dofs, v, 1);
    const Eigen::VectorXd bv = sys.B * v;
    // compare against -int q_j div(v) per pressure hat q_j via quadrature
    for (int j : {0, 3, 4, 7}) {
      double direct = 0.0;
      for (int t : mesh.vert_cells[j]) {
        const QuadRule& rule = triangle_rule(5);
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
          const auto& lam = rule.points[q];
          const std::array<double, 3> l{lam[0], lam[1], lam[2]};
          const BasisEval pr = eval_pressure_basis(mesh, t, l);
          int loc = -1;
          for (int k = 0; k < 3; ++k)
            if (mesh.cells[t][k] == j) loc = k;
          REQUIRE(loc >= 0);
          const double div =
              eval_component_grad(mesh, dofs, vx, t, l).x +
              eval_component_grad(mesh, dofs, vy, t, l).y;
          direct -= rule.weights[q] * mesh.cell_area(t) * pr.val[loc] * div;
        }
      }
      CHECK(bv[j] == doctest::Approx(direct).epsilon(1e-11));
    }
  }
}

TEST_CASE("stiffness block against the Dirichlet energy") {
  const Mesh mesh = build_structured_mesh(Pattern::CrissCross, 2);
  const SaddleSystem sys = assemble(mesh, PairKind::Mini);
  const DofMap& dofs = sys.dofs;
  std::mt19937 gen(23);
  const Eigen::VectorXd v = random_interior(dofs, gen);
  const Eigen::VectorXd vx = expand_component(dofs, v, 0);
  const Eigen::VectorXd vy = expand_component(dofs, v, 1);
  double energy = 0.0;
  const QuadRule& rule = triangle_rule(4);
  for (int t = 0; t < mesh.nc(); ++t) {
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& lam = rule.points[q];
      const std::array<double, 3> l{lam[0], lam[1], lam[2]};
      const Vec2 gx = eval_component_grad(mesh, dofs, vx, t, l);
      const Vec2 gy = eval_component_grad(mesh, dofs, vy, t, l);
      energy += rule.weights[q] * mesh.cell_area(t) *
                (dot(gx, gx) + dot(gy, gy));
    }
  }
  CHECK(v.dot(sys.A * v) == doctest::Approx(energy).epsilon(1e-11));
}

TEST_CASE("pressure mass against closed-form L2 norms") {
  const Mesh mesh = build_structured_mesh(Pattern::CrissCross, 4);
  const SaddleSystem sys = assemble(mesh, PairKind::TaylorHood);
  // q = x at the vertices: P1 interpolant is exactly x on the unit square,
  // so q^T M q = int x^2 = 1/3
  Eigen::VectorXd q(sys.dofs.n_pressure);
  for (int v = 0; v < mesh.nv(); ++v) q[v] = mesh.verts[v].x;
  CHECK(q.dot(sys.M * q) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(q.dot(sys.mean) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("constant weight scales the weighted blocks exactly") {
  const Mesh mesh = build_structured_mesh(Pattern::RightDiagonal, 3);
  const double c = 3.25;
  const SaddleSystem plain = assemble(mesh, PairKind::TaylorHood);
  const SaddleSystem sys =
      assemble(mesh, PairKind::TaylorHood, WeightSpec::constant(c));
  REQUIRE(sys.has_weight);
  CHECK((sys.A_w - c * plain.A).norm() < 1e-10 * plain.A.norm());
  CHECK((sys.M_w - c * plain.M).norm() < 1e-10 * plain.M.norm());
  // conjugate of a constant at p = 2 is its inverse
  CHECK((sys.A_wc - plain.A / c).norm() < 1e-10 * plain.A.norm());
  CHECK((sys.M_wc - plain.M / c).norm() < 1e-10 * plain.M.norm());
}

TEST_CASE("weighted stiffness matches graded quadrature for dist weights") {
  const Mesh mesh = build_structured_mesh(Pattern::CrissCross, 2);
  const WeightSpec w = WeightSpec::dist_power({0.5, 0.5}, -0.5);
  const SaddleSystem sys = assemble(mesh, PairKind::Mini, w);
  const DofMap& dofs = sys.dofs;
  std::mt19937 gen(31);
  const Eigen::VectorXd v = random_interior(dofs, gen);
  const Eigen::VectorXd vx = expand_component(dofs, v, 0);
  const Eigen::VectorXd vy = expand_component(dofs, v, 1);
  // sharp oracle: high-order rule and deep grading; the assembled value
  // carries its own default quadrature error (~1e-5 relative near the
  // singularity), which bounds the agreement
  double energy = 0.0;
  GradedOptions gopt;
  gopt.levels = 25;
  for (int t = 0; t < mesh.nc(); ++t) {
    energy += integrate_cell_graded(
        mesh, t,
        [&](Vec2 p) {
          const auto lb = mesh.barycentric(t, p);
          const Vec2 gx = eval_component_grad(mesh, dofs, vx, t, lb);
          const Vec2 gy = eval_component_grad(mesh, dofs, vy, t, lb);
          return w(p) * (dot(gx, gx) + dot(gy, gy));
        },
        triangle_rule(12), w.singular_points(), gopt);
  }
  CHECK(v.dot(sys.A_w * v) == doctest::Approx(energy).epsilon(2e-4));

  // assembled with matching quadrature knobs the gap closes
  AssemblyOptions sharp;
  sharp.quad_degree = 12;
  sharp.grading_levels = 25;
  const SaddleSystem refined = assemble(mesh, PairKind::Mini, w, sharp);
  CHECK(v.dot(refined.A_w * v) == doctest::Approx(energy).epsilon(1e-10));
}

TEST_CASE("regular load reproduces polynomial duality pairings") {
  const Mesh mesh = build_structured_mesh(Pattern::CrissCross, 3);
  const DofMap dofs = make_space(mesh, PairKind::TaylorHood);
  const auto f = [](Vec2 p) { return Vec2{p.x * p.y, 1.0 - p.y}; };
  const Eigen::VectorXd load = rhs_regular(mesh, dofs, f);
  std::mt19937 gen(41);
  const Eigen::VectorXd v = random_interior(dofs, gen);
  const Eigen::VectorXd vx = expand_component(dofs, v, 0);
  const Eigen::VectorXd vy = expand_component(dofs, v, 1);
  double direct = 0.0;
  const QuadRule& rule = triangle_rule(6);
  for (int t = 0; t < mesh.nc(); ++t) {
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& lam = rule.points[q];
      const std::array<double, 3> l{lam[0], lam[1], lam[2]};
      const Vec2 x = l[0] * mesh.vertex(t, 0) + l[1] * mesh.vertex(t, 1) +
                     l[2] * mesh.vertex(t, 2);
      direct += rule.weights[q] * mesh.cell_area(t) *
                (f(x).x * eval_component(mesh, dofs, vx, t, l) +
                 f(x).y * eval_component(mesh, dofs, vy, t, l));
    }
  }
  CHECK(load.dot(v) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("dirac load evaluates test functions at the source point") {
  const Mesh mesh = build_structured_mesh(Pattern::RightDiagonal, 3);
  const Vec2 z{0.4, 0.55};
  const Vec2 F{2.0, -1.0};
  for (PairKind kind : {PairKind::Mini, PairKind::TaylorHood}) {
    const DofMap dofs = make_space(mesh, kind);
    const Eigen::VectorXd load = rhs_dirac(mesh, dofs, z, F);
    std::mt19937 gen(43);
    const int cell = locate_point(mesh, z);
    const auto lam = mesh.barycentric(cell, z);
    for (int rep = 0; rep < 5; ++rep) {
      const Eigen::VectorXd v = random_interior(dofs, gen);
      const Eigen::VectorXd vx = expand_component(dofs, v, 0);
      const Eigen::VectorXd vy = expand_component(dofs, v, 1);
      const double vhx = eval_component(mesh, dofs, vx, cell, lam);
      const double vhy = eval_component(mesh, dofs, vy, cell, lam);
      CHECK(load.dot(v) ==
            doctest::Approx(F.x * vhx + F.y * vhy).epsilon(1e-12));
    }
  }
}

TEST_CASE("projection load is the weak residual of the exact pair") {
  // with u linear and pi constant the load reduces to int grad(u):grad(v),
  // computable exactly from A acting on the interpolant of u
  const Mesh mesh = build_structured_mesh(Pattern::CrissCross, 2);
  const SaddleSystem sys = assemble(mesh, PairKind::TaylorHood);
  const DofMap& dofs = sys.dofs;
  const GradField grad_u = [](Vec2) {
    return std::array<Vec2, 2>{Vec2{1.0, 2.0}, Vec2{-3.0, 0.5}};
  };
  const ScalarField pi = [](Vec2) { return 4.0; };
  const Eigen::VectorXd load = rhs_projection(mesh, dofs, grad_u, pi);
  std::mt19937 gen(47);
  for (int rep = 0; rep < 5; ++rep) {
    const Eigen::VectorXd v = random_interior(dofs, gen);
    const Eigen::VectorXd vx = expand_component(dofs, v, 0);
    const Eigen::VectorXd vy = expand_component(dofs, v, 1);
    // int grad(u):grad(v) for constant grad(u) vanishes against zero-trace v
    // except through the divergence: int a:grad(v) = 0 since each component
    // integrates a constant against the gradient of a zero-trace function;
    // likewise int pi div v = 0, so the load must annihilate all v
    CHECK(std::abs(load.dot(v)) < 1e-11 * v.norm());
  }
}

TEST_CASE("projection load against direct quadrature for smooth data") {
  const Mesh mesh = build_structured_mesh(Pattern::CrissCross, 2);
  const DofMap dofs = make_space(mesh, PairKind::Mini);
  const GradField grad_u = [](Vec2 p) {
    return std::array<Vec2, 2>{Vec2{p.y, p.x}, Vec2{2.0 * p.x, -p.y}};
  };
  const ScalarField pi = [](Vec2 p) { return p.x - p.y; };
  const Eigen::VectorXd load = rhs_projection(mesh, dofs, grad_u, pi, 8);
  std::mt19937 gen(53);
  const Eigen::VectorXd v = random_interior(dofs, gen);
  const Eigen::VectorXd vx = expand_component(dofs, v, 0);
  const Eigen::VectorXd vy = expand_component(dofs, v, 1);
  double direct = 0.0;
  const QuadRule& rule = triangle_rule(8);
  for (int t = 0; t < mesh.nc(); ++t) {
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& lam = rule.points[q];
      const std::array<double, 3> l{lam[0], lam[1], lam[2]};
      const Vec2 x = l[0] * mesh.vertex(t, 0) + l[1] * mesh.vertex(t, 1) +
                     l[2] * mesh.vertex(t, 2);
      const Vec2 gx = eval_component_grad(mesh, dofs, vx, t, l);
      const Vec2 gy = eval_component_grad(mesh, dofs, vy, t, l);
      const auto gu = grad_u(x);
      const double w = rule.weights[q] * mesh.cell_area(t);
      direct += w * (dot(gu[0], gx) + dot(gu[1], gy));
      direct -= w * pi(x) * (gx.x + gy.y);
    }
  }
  CHECK(load.dot(v) == doctest::Approx(direct).epsilon(1e-11));
}

TEST_CASE("regularized delta satisfies the moment identities") {
  const Mesh mesh = build_structured_mesh(Pattern::CrissCross, 4);
  const Vec2 z{0.37, 0.61};
  for (PairKind kind : {PairKind::Mini, PairKind::TaylorHood}) {
    const RegularizedDelta delta = build_regularized_delta(mesh, kind, z);
    CHECK(delta.cell == locate_point(mesh, z));
    CHECK(delta.moment_residual() < 1e-10);

    // int delta * v_h = v_h(z) and int delta * d_i v_h = d_i v_h(z) for
    // random discrete fields, checked by quadrature over the support cell
    const DofMap dofs = make_space(mesh, kind);
    std::mt19937 gen(61);
    const auto lam_z = mesh.barycentric(delta.cell, z);
    // delta times a mini velocity is degree 12, so the rule must cover it
    const QuadRule& rule = triangle_rule(14);
    for (int rep = 0; rep < 8; ++rep) {
      Eigen::VectorXd coeff(dofs.n_scalar);
      std::normal_distribution<double> g(0.0, 1.0);
      for (int s = 0; s < dofs.n_scalar; ++s) coeff[s] = g(gen);
      double val = 0.0;
      Vec2 grd{0, 0};
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const auto& lam = rule.points[q];
        const std::array<double, 3> l{lam[0], lam[1], lam[2]};
        const Vec2 x = l[0] * mesh.vertex(delta.cell, 0) +
                       l[1] * mesh.vertex(delta.cell, 1) +
                       l[2] * mesh.vertex(delta.cell, 2);
        const double wq =
            rule.weights[q] * mesh.cell_area(delta.cell) * delta.eval(x);
        val += wq * eval_component(mesh, dofs, coeff, delta.cell, l);
        const Vec2 gq =
            eval_component_grad(mesh, dofs, coeff, delta.cell, l);
        grd = grd + wq * gq;
      }
      const double at_z =
          eval_component(mesh, dofs, coeff, delta.cell, lam_z);
      const Vec2 grad_at_z =
          eval_component_grad(mesh, dofs, coeff, delta.cell, lam_z);
      CHECK(val == doctest::Approx(at_z).epsilon(1e-9));
      CHECK(norm(grd - grad_at_z) < 1e-9 * (1.0 + norm(grad_at_z)));
    }

    // vanishes outside the support cell
    CHECK(delta.eval({0.01, 0.01}) == 0.0);
  }
}

TEST_CASE("delta scaling: sup norm times h^2 is mesh-independent") {
  // the sup-norm constant depends on where the source sits inside its cell,
  // so the level comparison anchors z at the host-cell barycenter; on the
  // similar cells of a structured family the constant is then exact
  const Vec2 nominal{0.31, 0.27};
  for (PairKind kind : {PairKind::Mini, PairKind::TaylorHood}) {
    std::vector<double> scaled;
    for (int n : {4, 8, 16}) {
      const Mesh mesh = build_structured_mesh(Pattern::CrissCross, n);
      const Vec2 z = mesh.barycenter(locate_point(mesh, nominal));
      const RegularizedDelta d = build_regularized_delta(mesh, kind, z);
      double sup = 0.0;
      const QuadRule& rule = triangle_rule(10);
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const auto& lam = rule.points[q];
        const Vec2 x = lam[0] * mesh.vertex(d.cell, 0) +
                       lam[1] * mesh.vertex(d.cell, 1) +
                       lam[2] * mesh.vertex(d.cell, 2);
        sup = std::max(sup, std::abs(d.eval(x)));
      }
      scaled.push_back(sup * mesh.h() * mesh.h());
    }
    CHECK(scaled[1] == doctest::Approx(scaled[0]).epsilon(1e-9));
    CHECK(scaled[2] == doctest::Approx(scaled[0]).epsilon(1e-9));
  }
}

TEST_CASE("green load equals the derivative moment on the delta's own mesh") {
  const Mesh mesh = build_structured_mesh(Pattern::CrissCross, 4);
  const Vec2 z{0.52, 0.48};
  const DofMap dofs = make_space(mesh, PairKind::TaylorHood);
  const RegularizedDelta delta =
      build_regularized_delta(mesh, PairKind::TaylorHood, z);
  const auto lam_z = mesh.barycentric(delta.cell, z);
  std::mt19937 gen(67);
  for (int i : {0, 1}) {
    for (int j : {0, 1}) {
      const Eigen::VectorXd load = rhs_green(mesh, dofs, delta, i, j);
      for (int rep = 0; rep < 4; ++rep) {
        const Eigen::VectorXd v = random_interior(dofs, gen);
        const Eigen::VectorXd vc = expand_component(dofs, v, j);
        const Vec2 g =
            eval_component_grad(mesh, dofs, vc, delta.cell, lam_z);
        const double di = (i == 0) ? g.x : g.y;
        CHECK(load.dot(v) == doctest::Approx(di).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("green load is consistent across nested refinements") {
  // the delta lives on the coarse mesh; integrating it against fine-mesh
  // test functions must still reproduce fine-mesh derivatives at z for
  // fields that are refinements of coarse discrete fields
  const Mesh coarse = build_structured_mesh(Pattern::CrissCross, 4);
  const Mesh fine = build_structured_mesh(Pattern::CrissCross, 8);
  const Vec2 z{0.52, 0.48};
  const RegularizedDelta delta =
      build_regularized_delta(coarse, PairKind::TaylorHood, z);
  const DofMap fdofs = make_space(fine, PairKind::TaylorHood);
  const Eigen::VectorXd load = rhs_green(fine, fdofs, delta, 0, 0);
  // fine-mesh interpolant of a smooth field: quadratic, reproduced exactly
  const auto f = [](Vec2 p) { return p.x * p.x + 0.5 * p.x * p.y - p.y; };
  Eigen::VectorXd coeff(fdofs.n_scalar);
  for (int v = 0; v < fine.nv(); ++v) coeff[v] = f(fine.verts[v]);
  for (int e = 0; e < fine.ne(); ++e) {
    const Vec2 mid =
        0.5 * (fine.verts[fine.edges[e].a] + fine.verts[fine.edges[e].b]);
    coeff[fine.nv() + e] = f(mid);
  }
  const Eigen::VectorXd vi = interior_component(fdofs, coeff, 0);
  // d_x f at z, but only the interior part of the interpolant is loaded;
  // f vanishes on no boundary dof, so restrict the identity to the moment
  // integral computed directly with the same coefficients
  double direct = 0.0;
  const QuadRule& rule = triangle_rule(12);
  for (int t = 0; t < fine.nc(); ++t) {
    // skip cells outside the delta support
    const Vec2 bc = fine.barycenter(t);
    if (delta.eval(bc) == 0.0 &&
        delta.eval(0.99 * bc + 0.01 * delta.z) == 0.0)
      continue;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& lam = rule.points[q];
      const std::array<double, 3> l{lam[0], lam[1], lam[2]};
      const Vec2 x = l[0] * fine.vertex(t, 0) + l[1] * fine.vertex(t, 1) +
                     l[2] * fine.vertex(t, 2);
      const Vec2 g = eval_component_grad(fine, fdofs, coeff, t, l);
      direct += rule.weights[q] * fine.cell_area(t) * delta.eval(x) * g.x;
    }
  }
  CHECK(load.dot(vi) == doctest::Approx(direct).epsilon(1e-9));
}

TEST_CASE("delta rejects points outside the domain") {
  const Mesh mesh = build_structured_mesh(Pattern::CrissCross, 4);
  CHECK_THROWS_AS(
      build_regularized_delta(mesh, PairKind::Mini, {1.5, 0.5}),
      std::out_of_range);
}
