#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stokeslab/approximation.hpp"
#include "stokeslab/solver.hpp"

namespace stokeslab {

// raised when a mathematical applicability gate fails (CLI exit code 2)
struct GateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// discrete pair with full coefficient vectors (boundary dofs included);
// velocity scalars are stored per component, pressure per vertex
struct DiscreteField {
  const Mesh* mesh = nullptr;
  DofMap dofs;
  Eigen::VectorXd vel;  // 2 * dofs.n_scalar, may be empty
  Eigen::VectorXd pr;   // nv, may be empty

  Vec2 velocity(Vec2 x, int cell = -1) const;
  std::array<Vec2, 2> gradient(Vec2 x, int cell = -1) const;
  double pressure(Vec2 x, int cell = -1) const;
  Vec2 velocity_at(int cell, const std::array<double, 3>& lam) const;
  std::array<Vec2, 2> gradient_at(int cell,
                                  const std::array<double, 3>& lam) const;
  double pressure_at(int cell, const std::array<double, 3>& lam) const;
};

DiscreteField make_field(const Mesh& mesh, const DofMap& dofs,
                         const Solution& sol);
// wraps full velocity coefficients (e.g. an interpolant) without a pressure
DiscreteField make_velocity_field(const Mesh& mesh, const DofMap& dofs,
                                  const Eigen::VectorXd& full_vel);

struct ExactSolution {
  VectorField velocity;
  GradField gradient;
  ScalarField pressure;
  std::vector<Vec2> singular;
};

// divergence-free polynomial-curl velocity with zero trace on the unit
// square and a smooth zero-mean pressure; the only registered name
ExactSolution manufactured_solution(const std::string& name);
// free-space response to a point force at z (singular at z)
ExactSolution stokeslet(Vec2 z, Vec2 F);

// ---- weighted L^p norms (integrals evaluated per cell, graded near any
// singular point of the weight or the field) ----
double weighted_lp_integral(
    const Mesh& mesh, const std::function<double(int, Vec2)>& abs_p_density,
    const std::optional<WeightSpec>& weight, int quad_degree,
    const std::vector<Vec2>& singular = {}, int grading_levels = 8);

double norm_velocity(const DiscreteField& f, double p,
                     const std::optional<WeightSpec>& w, int quad_degree = 8);
double norm_gradient(const DiscreteField& f, double p,
                     const std::optional<WeightSpec>& w, int quad_degree = 8);
double norm_pressure(const DiscreteField& f, double p,
                     const std::optional<WeightSpec>& w, int quad_degree = 8);
double exact_norm_gradient(const Mesh& mesh, const ExactSolution& ex, double p,
                           const std::optional<WeightSpec>& w,
                           int quad_degree = 8);
double exact_norm_pressure(const Mesh& mesh, const ExactSolution& ex, double p,
                           const std::optional<WeightSpec>& w,
                           int quad_degree = 8);
double err_velocity(const ExactSolution& ex, const DiscreteField& f, double p,
                    const std::optional<WeightSpec>& w, int quad_degree = 8);
double err_gradient(const ExactSolution& ex, const DiscreteField& f, double p,
                    const std::optional<WeightSpec>& w, int quad_degree = 8);
double err_pressure(const ExactSolution& ex, const DiscreteField& f, double p,
                    const std::optional<WeightSpec>& w, int quad_degree = 8);

// errors between fields on nested meshes, integrated over the finer mesh;
// the coarse field is evaluated through a per-cell containment hint
double cross_err_velocity_l2(const DiscreteField& fine,
                             const DiscreteField& coarse, int quad_degree = 8);
double cross_err_gradient(const DiscreteField& fine,
                          const DiscreteField& coarse, double p,
                          const std::optional<WeightSpec>& w,
                          int quad_degree = 8);

double eoc(double err_coarse, double err_fine, double h_coarse, double h_fine);

// ---- experiment drivers ----
struct ExperimentConfig {
  Pattern pattern = Pattern::CrissCross;
  PairKind pair = PairKind::TaylorHood;
  int levels = 4;
  int n0 = 4;
  double p = 2.0;
  std::optional<WeightSpec> weight;
  Vec2 z{0.5, 0.5};
  Vec2 force{1.0, 0.0};
  double alpha = 1.0;   // dirac measurement weight exponent
  double kappa = 2.0;   // regularization width factor
  double lambda = 0.1;  // decay exponent
  int deriv_i = 0, deriv_j = 0;
  int quad_degree = 6;
  int grading_levels = 8;
  unsigned seed = 1234;
  bool force_gates = false;
  Rect domain{0.0, 0.0, 1.0, 1.0};
};

struct LevelRow {
  int level = 0;
  double h = 0.0;
  long long dofs = 0;
  std::vector<double> values;
};

struct ExperimentResult {
  std::string name;
  std::vector<std::string> columns;
  std::vector<int> eoc_of;  // column indices that get an eoc column
  std::vector<LevelRow> rows;
  std::vector<std::pair<std::string, std::string>> info;  // config echo
};

ExperimentResult mesh_info_experiment(const ExperimentConfig& cfg);
ExperimentResult weights_diag_experiment(const ExperimentConfig& cfg);
ExperimentResult convergence_experiment(const ExperimentConfig& cfg);
ExperimentResult stability_experiment(const ExperimentConfig& cfg);
ExperimentResult infsup_experiment(const ExperimentConfig& cfg);
ExperimentResult dirac_experiment(const ExperimentConfig& cfg);
ExperimentResult green_experiment(const ExperimentConfig& cfg);

// projects an already-discrete pair and returns the stability ratio, which
// is exactly 1 up to solver roundoff since the projection fixes the space
double stability_self_consistency(const ExperimentConfig& cfg, int n);

}  // namespace stokeslab
