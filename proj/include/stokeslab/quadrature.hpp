#pragma once

#include <array>
#include <vector>

namespace stokeslab {

// Quadrature on the reference triangle in barycentric coordinates.
// Weights are area fractions (they sum to 1): int_T f ~ |T| * sum w_q f(x_q).
struct QuadRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int degree = 0;  // total polynomial degree integrated exactly
};

// smallest stored symmetric rule with exactness >= degree; degrees above the
// stored tables fall back to a tensor Gauss rule
const QuadRule& triangle_rule(int degree);

// degree-2 rule supported on the 3 vertices (weight 0) and 3 edge midpoints
const QuadRule& vertex_midpoint_rule();

// tensor Gauss rule on the collapsed square, n*n points, exact to degree 2n-2
QuadRule tensor_gauss_rule(int n);

// int over the unit reference triangle (area 1/2) of l1^a l2^b l3^c
double monomial_integral(int a, int b, int c);

// Gauss-Legendre nodes/weights on [0,1]
void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights);

}  // namespace stokeslab
