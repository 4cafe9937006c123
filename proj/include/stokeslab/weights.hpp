#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stokeslab/integrate.hpp"
#include "stokeslab/mesh.hpp"

namespace stokeslab {

// Weight functions built from a small closed grammar: positive constants,
// powers of the distance to a point/segment set K, the shifted-distance
// (natterer) kernel sqrt(|x-y|^2 + (kappa h)^2), pointwise conjugation
// w^(1/(1-p)) and pointwise powers. The natterer mesh size h may stay unbound
// until bind_mesh_size supplies the level value.
class WeightSpec {
 public:
  enum class Kind { Constant, DistPower, Natterer, Conjugate, Power };

  static WeightSpec constant(double c);
  static WeightSpec dist_power(Vec2 z, double alpha);
  static WeightSpec dist_power(std::vector<Vec2> points, double alpha);
  static WeightSpec dist_power_segment(Vec2 a, Vec2 b, double alpha);
  static WeightSpec natterer(Vec2 y, double kappa,
                             std::optional<double> h = std::nullopt);
  static WeightSpec conjugate(const WeightSpec& inner, double p);
  static WeightSpec power(const WeightSpec& inner, double s);

  double eval(Vec2 x) const;
  double operator()(Vec2 x) const { return eval(x); }

  Kind kind() const;
  double constant_value() const;
  double alpha() const;       // DistPower
  int k_dim() const;          // 0 for point sets, 1 for segments
  double kappa() const;       // Natterer
  Vec2 natterer_center() const;
  double conj_p() const;      // Conjugate
  double exponent() const;    // Power
  WeightSpec inner() const;   // Conjugate / Power

  bool has_unbound_mesh_size() const;
  WeightSpec bind_mesh_size(double h) const;

  // points where the weight is singular or vanishes (quadrature grades there)
  std::vector<Vec2> singular_points() const;

  std::string to_string() const;
  static WeightSpec parse(const std::string& spec);

 private:
  struct Node;
  std::shared_ptr<const Node> node_;
  explicit WeightSpec(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
};

// admissible exponent range: dist(.,K)^alpha is A_p iff
// -(d-k) < alpha < (d-k)(p-1), K a compact k-dimensional set
struct ApRange {
  double lo = 0.0, hi = 0.0;
  bool contains(double a) const { return a > lo && a < hi; }
};
ApRange ap_admissible_range(int d, int k, double p);

struct Ball {
  Vec2 center;
  double radius = 0.0;
};

// balls centered on the given points and on a coarse interior grid, with
// geometrically spaced radii between h_min and the domain diameter
std::vector<Ball> default_ball_family(const Rect& domain,
                                      const std::vector<Vec2>& centers,
                                      double h_min);

// sampled sup over the ball family of (avg w)(avg w^{1/(1-p)})^{p-1};
// a lower bound for the A_p constant, >= 1 by Jensen
double estimate_ap_constant(const WeightSpec& w, double p,
                            const std::vector<Ball>& balls,
                            const BallQuadOptions& opt = BallQuadOptions{});

// int_T w and int_B w with singularity-graded quadrature; throws
// std::domain_error when the integral keeps growing under grading
double weight_measure_cell(const WeightSpec& w, const Mesh& mesh, int cell,
                           int quad_degree = 6, int grading_levels = 8);
double weight_measure_ball(const WeightSpec& w, const Ball& ball);

// centered-square approximation of the maximal function: max over the given
// side lengths of the average of w over the square centered at x (a lower
// bound for the true maximal function, which also ranges over offset cubes)
double approx_maximal(const WeightSpec& w, Vec2 x,
                      const std::vector<double>& sides, int n_grid = 128);

// per-level values of int_Omega sigma_y^{-2-lambda} dx / h^{-lambda}, maxed
// over y samples; sigma_y = sqrt(|x-y|^2 + (kappa h)^2) with the level h
std::vector<double> natterer_integral_ratio(
    double lambda, double kappa, int levels, int n0 = 4,
    Pattern pattern = Pattern::CrissCross, Rect domain = Rect{},
    std::vector<Vec2> y_samples = {});

// r^{p+d}/R^{p+d} * w(B(x,R))/w(B(x,r)); stays bounded away from 0 and
// infinity in the regime where the weighted embedding constant is uniform
double embedding_condition_ratio(const WeightSpec& w, double p, Vec2 x,
                                 double r, double R);

// restricted-class membership on a boundary collar of width eps: w must be
// continuous and positive there, so no singular/vanishing point of K may
// meet the closed collar and sampled values must stay positive
bool ap_restricted_check(const WeightSpec& w, const Rect& domain, double eps,
                         int n_samples = 64);

}  // namespace stokeslab
