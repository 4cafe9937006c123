#include "stokeslab/solver.hpp"

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace stokeslab {

SaddleSolver::SaddleSolver(const SaddleSystem& sys)
    : sys_(&sys),
      nis_(sys.dofs.n_interior_scalar),
      np_(static_cast<int>(sys.B.rows())) {
  SpMat scalar = sys.A.topLeftCorner(nis_, nis_);
  scalar.makeCompressed();
  scalar_ldlt_.compute(scalar);
  if (scalar_ldlt_.info() != Eigen::Success)
    throw std::runtime_error("saddle solve: stiffness factorization failed");
  mass_ldlt_.compute(sys.M);
  if (mass_ldlt_.info() != Eigen::Success)
    throw std::runtime_error("saddle solve: mass factorization failed");
  BT_ = sys.B.transpose();
}

Eigen::VectorXd SaddleSolver::solve_a(const Eigen::VectorXd& f) const {
  Eigen::VectorXd out(2 * nis_);
  out.head(nis_) = scalar_ldlt_.solve(f.head(nis_));
  out.tail(nis_) = scalar_ldlt_.solve(f.tail(nis_));
  return out;
}

Solution SaddleSolver::solve(const Eigen::VectorXd& load,
                             const SolveOptions& opt) const {
  const auto t0 = std::chrono::steady_clock::now();
  if (load.size() != 2 * nis_)
    throw std::invalid_argument("saddle solve: load size mismatch");
  const Eigen::VectorXd& mean = sys_->mean;
  const double area = sys_->domain_area;

  const Eigen::VectorXd u_free = solve_a(load);
  const Eigen::VectorXd g = sys_->B * u_free;

  // CG on S p = g with S = B A^{-1} B^T; the preconditioned residual is
  // projected onto the zero-mean subspace, where S is positive definite
  auto project = [&](Eigen::VectorXd& v) {
    v.array() -= mean.dot(v) / area;
  };
  Eigen::VectorXd p = Eigen::VectorXd::Zero(np_);
  Eigen::VectorXd r = g;
  const double g_norm = std::max(g.norm(), 1e-300);
  Eigen::VectorXd z = mass_ldlt_.solve(r);
  project(z);
  Eigen::VectorXd d = z;
  double rho = r.dot(z);
  int iter = 0;
  while (r.norm() > opt.cg_tol * g_norm) {
    if (++iter > opt.cg_max_iter) {
      char buf[128];
      std::snprintf(buf, sizeof buf,
                    "saddle solve: CG stalled at relative residual %.3e",
                    r.norm() / g_norm);
      throw std::runtime_error(buf);
    }
    const Eigen::VectorXd Sd = sys_->B * solve_a(BT_ * d);
    const double alpha = rho / d.dot(Sd);
    p += alpha * d;
    r -= alpha * Sd;
    z = mass_ldlt_.solve(r);
    project(z);
    const double rho_new = r.dot(z);
    d = z + (rho_new / rho) * d;
    rho = rho_new;
  }
  const Eigen::VectorXd u = solve_a(load - BT_ * p);

  Solution sol;
  sol.backend = "schur-cg";
  sol.iterations = iter;
  const double load_norm = std::max(load.norm(), 1e-300);
  const Eigen::VectorXd ru = sys_->A * u + BT_ * p - load;
  const Eigen::VectorXd rp = sys_->B * u;
  const double rm = mean.dot(p);
  sol.residual =
      std::sqrt(ru.squaredNorm() + rp.squaredNorm() + rm * rm) / load_norm;
  if (!(sol.residual <= opt.rtol)) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "saddle solve: residual %.3e exceeds tolerance %.3e",
                  sol.residual, opt.rtol);
    throw std::runtime_error(buf);
  }
  sol.u = u;
  sol.p = p;
  sol.p.array() -= mean.dot(sol.p) / area;
  sol.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return sol;
}

Solution solve_saddle(const SaddleSystem& sys, const Eigen::VectorXd& load,
                      const SolveOptions& opt) {
  return SaddleSolver(sys).solve(load, opt);
}

double infsup_beta(const SaddleSystem& sys) {
  const SpMat& As = sys.has_weight ? sys.A_wc : sys.A;
  const SpMat& Mp = sys.has_weight ? sys.M_w : sys.M;
  const int np = static_cast<int>(sys.B.rows());
  if (np < 2) throw std::invalid_argument("infsup: pressure space too small");

  Eigen::SimplicialLDLT<SpMat> ldlt(As);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("infsup: stiffness factorization failed");

  SpMat BT = sys.B.transpose();
  Eigen::MatrixXd S(np, np);
  for (int q = 0; q < np; ++q) {
    Eigen::VectorXd col = BT.col(q);
    S.col(q) = sys.B * ldlt.solve(col);
  }
  S = 0.5 * (S + S.transpose()).eval();

  // deflate the constant pressure: basis z_k = e_k - (m_k/m_0) e_0
  const Eigen::VectorXd& m = sys.mean;
  if (std::abs(m[0]) < 1e-300)
    throw std::runtime_error("infsup: degenerate mean vector");
  Eigen::VectorXd a = m.tail(np - 1) / m[0];

  Eigen::MatrixXd Md = Eigen::MatrixXd(Mp);
  auto deflate = [&](const Eigen::MatrixXd& X) {
    Eigen::MatrixXd X11 = X.bottomRightCorner(np - 1, np - 1);
    Eigen::VectorXd x0 = X.block(1, 0, np - 1, 1);
    const double x00 = X(0, 0);
    return Eigen::MatrixXd(X11 - x0 * a.transpose() - a * x0.transpose() +
                           x00 * a * a.transpose());
  };
  Eigen::MatrixXd Sh = deflate(S);
  Eigen::MatrixXd Mh = deflate(Md);

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(
      Sh, Mh, Eigen::EigenvaluesOnly);
  if (ges.info() != Eigen::Success)
    throw std::runtime_error("infsup: eigenvalue solve failed");
  const double lo = ges.eigenvalues()(0);
  const double hi = ges.eigenvalues()(ges.eigenvalues().size() - 1);
  if (lo < -1e-8 * std::max(hi, 1.0))
    throw std::runtime_error("infsup: Schur complement not positive");
  return std::sqrt(std::max(lo, 0.0));
}

Solution solve_green(const Mesh& mesh, const SaddleSolver& solver,
                     const RegularizedDelta& delta, int i, int j,
                     const SolveOptions& opt) {
  const Eigen::VectorXd load =
      rhs_green(mesh, solver.system().dofs, delta, i, j);
  return solver.solve(load, opt);
}

}  // namespace stokeslab
