#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <optional>

#include "stokeslab/fem_spaces.hpp"
#include "stokeslab/integrate.hpp"
#include "stokeslab/weights.hpp"

namespace stokeslab {

using SpMat = Eigen::SparseMatrix<double>;

struct AssemblyOptions {
  int quad_degree = 6;
  int grading_levels = 8;
};

// Saddle blocks for the Stokes pair after eliminating boundary velocity dofs:
//   [ A  B^T ] [u]   [f]
//   [ B  0   ] [p] = [0]   with the global zero-mean pressure constraint
// A is the velocity Laplacian on interior dofs, B[q, v] = -int q div(v),
// mean[q] = int q. With a weight (p = 2 only) the omega- and conjugate-
// weighted stiffness and pressure mass blocks are assembled as well.
struct SaddleSystem {
  DofMap dofs;
  SpMat A;
  SpMat B;
  SpMat M;  // unweighted pressure mass
  Eigen::VectorXd mean;
  double domain_area = 0.0;
  bool has_weight = false;
  SpMat A_w, A_wc, M_w, M_wc;
};

SaddleSystem assemble(const Mesh& mesh, PairKind kind,
                      const std::optional<WeightSpec>& weight = std::nullopt,
                      const AssemblyOptions& opt = AssemblyOptions{});

using VectorField = std::function<Vec2(Vec2)>;
using GradField = std::function<std::array<Vec2, 2>(Vec2)>;  // [comp] -> grad

// loads on interior velocity dofs
Eigen::VectorXd rhs_regular(const Mesh& mesh, const DofMap& dofs,
                            const VectorField& f, int quad_degree = 6);
Eigen::VectorXd rhs_dirac(const Mesh& mesh, const DofMap& dofs, Vec2 z,
                          Vec2 F);
// Stokes projection load of an exact pair: int grad(u):grad(v) - int pi div(v)
Eigen::VectorXd rhs_projection(const Mesh& mesh, const DofMap& dofs,
                               const GradField& grad_u,
                               const ScalarField& pressure,
                               int quad_degree = 6,
                               const std::vector<Vec2>& singular = {},
                               int grading_levels = 8);

// delta_z = b_T^2 q supported on the cell containing z; q solves the moment
// system int b^2 q r = r(z) with r spanning the local velocity functions and
// their first derivatives, so int delta_z v_h = v_h(z) and the same identity
// holds for first derivatives of v_h
struct RegularizedDelta {
  PairKind kind = PairKind::TaylorHood;
  int cell = -1;
  Vec2 z;
  std::array<Vec2, 3> tri;
  Eigen::VectorXd coeffs;  // moment-basis coefficients
  double eval(Vec2 x) const;  // 0 outside the support cell
  double moment_residual() const;  // max defect of the moment system
};

RegularizedDelta build_regularized_delta(const Mesh& mesh, PairKind kind,
                                         Vec2 z);

// load with entries int delta.eval * d_i(basis of component j); mesh may be
// the delta's own mesh or a nested refinement of it
Eigen::VectorXd rhs_green(const Mesh& mesh, const DofMap& dofs,
                          const RegularizedDelta& delta, int i, int j);

}  // namespace stokeslab
