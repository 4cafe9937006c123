#pragma once

#include <Eigen/Dense>
#include <optional>

#include "stokeslab/assembly.hpp"

namespace stokeslab {

// Star-average quasi-interpolant onto continuous P1: the value at a vertex is
// the plain average of the field over the union of cells containing it.
//   Plain    : no modification (the form the local estimates are stated for)
//   Velocity : boundary-vertex values are set to zero
//   Pressure : a constant is added so the interpolant has zero mean
enum class InterpVariant { Plain, Velocity, Pressure };

std::vector<double> quasi_interpolate(const Mesh& mesh, const ScalarField& f,
                                      InterpVariant variant,
                                      int quad_degree = 6,
                                      const std::vector<Vec2>& singular = {});

// nodal embedding of P1 vertex values into a pair's scalar velocity space
Eigen::VectorXd embed_p1(const Mesh& mesh, const DofMap& dofs,
                         const std::vector<double>& vertex_values);

// per-cell ratios of the local interpolation estimates, maxed over cells:
//   c_stab  : |grad Pi v|_Lp(w,T)   / |grad v|_Lp(w,S_T)
//   c_err   : |v - Pi v|_Lp(w,T)    / (h_T |grad v|_Lp(w,S_T))
//   mixed   : |v - Pi v|_Lp(T)      / (h_T^{1+2/p} w(S_T)^{-1/p} |grad v|_Lp(w,S_T))
// interior maxima restrict to cells whose vertices are all interior, where
// the plain star average reproduces linear fields on symmetric stars
struct InterpReport {
  double c_stab_max = 0.0, c_err_max = 0.0, mixed_max = 0.0;
  double c_stab_interior = 0.0, c_err_interior = 0.0;
  double err_lp = 0.0;  // global |v - Pi v|_Lp(w) for the plain variant
};
InterpReport interp_estimates_report(const Mesh& mesh, const ScalarField& f,
                                     const std::function<Vec2(Vec2)>& grad_f,
                                     const std::optional<WeightSpec>& weight,
                                     double p, int quad_degree = 6,
                                     const std::vector<Vec2>& singular = {});

// Fortin operator for the mini pair: the quasi-interpolant plus one bubble
// per cell and component, scaled so cell averages of v are preserved; then
// b(v - Fv, q_h) = 0 for every continuous P1 pressure
Eigen::VectorXd fortin_mini(const Mesh& mesh, const DofMap& dofs,
                            const VectorField& v, int quad_degree = 8,
                            const std::vector<Vec2>& singular = {});

// Taylor-Hood velocity perturbation built from a P1 pressure: zero at all
// vertices and boundary midpoints; at the midpoint of an interior edge e,
//   w_h(m) = -|e|^{p'} tau_e sign(dq) |dq|^{p'-1} w'(T)/|T|,
// dq the tangential derivative of q along e and T the lower-indexed cell
// sharing e. Requires every cell to have at least two interior edges.
Eigen::VectorXd th_perturbation_field(const Mesh& mesh, const DofMap& dofs,
                                      const Eigen::VectorXd& q,
                                      const WeightSpec& weight, double p,
                                      int grading_levels = 8);

}  // namespace stokeslab
