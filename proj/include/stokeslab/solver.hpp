#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <string>

#include "stokeslab/assembly.hpp"

namespace stokeslab {

struct SolveOptions {
  double rtol = 1e-9;     // admissible relative residual of the full system
  double cg_tol = 1e-13;  // Schur CG relative tolerance
  int cg_max_iter = 2000;
};

struct Solution {
  Eigen::VectorXd u;  // interior velocity coefficients (component blocks)
  Eigen::VectorXd p;  // vertex pressure coefficients, shifted to zero mean
  double residual = 0.0;
  int iterations = 0;
  double seconds = 0.0;
  std::string backend;
};

// Pressure Schur complement solver for
//   [ A  B^T ] [u]   [f]
//   [ B  0   ] [p] = [0]   with mean^T p = 0.
// A consists of two copies of the interior scalar stiffness, which is
// factored once (Cholesky) and reused; S p = B A^{-1} f is solved by CG
// preconditioned with the pressure mass, deflating the constant-pressure
// null vector. The factorization is reused across load vectors.
class SaddleSolver {
 public:
  explicit SaddleSolver(const SaddleSystem& sys);
  Solution solve(const Eigen::VectorXd& load,
                 const SolveOptions& opt = SolveOptions{}) const;
  const SaddleSystem& system() const { return *sys_; }

 private:
  Eigen::VectorXd solve_a(const Eigen::VectorXd& f) const;

  const SaddleSystem* sys_;
  int nis_ = 0, np_ = 0;
  SpMat BT_;
  Eigen::SimplicialLDLT<SpMat> scalar_ldlt_;
  Eigen::SimplicialLDLT<SpMat> mass_ldlt_;
};

Solution solve_saddle(const SaddleSystem& sys, const Eigen::VectorXd& load,
                      const SolveOptions& opt = SolveOptions{});

// smallest generalized eigenvalue of the pressure Schur complement against
// the pressure mass, restricted to the zero-mean subspace; its square root
// is the discrete inf-sup constant. Weighted systems use the conjugate-
// weighted stiffness and the weighted mass.
double infsup_beta(const SaddleSystem& sys);

Solution solve_green(const Mesh& mesh, const SaddleSolver& solver,
                     const RegularizedDelta& delta, int i, int j,
                     const SolveOptions& opt = SolveOptions{});

}  // namespace stokeslab
