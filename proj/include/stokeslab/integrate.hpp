#pragma once

#include <functional>
#include <vector>

#include "stokeslab/mesh.hpp"
#include "stokeslab/quadrature.hpp"

namespace stokeslab {

using ScalarField = std::function<double(Vec2)>;

struct GradedOptions {
  int levels = 8;       // geometric subdivision levels toward the singularity
  double ratio = 0.5;
  bool check_divergence = false;  // throw std::domain_error if level sums grow
};

double integrate_triangle(Vec2 a, Vec2 b, Vec2 c, const ScalarField& f,
                          const QuadRule& rule);

double integrate_cell(const Mesh& mesh, int cell, const ScalarField& f,
                      const QuadRule& rule);

// Like integrate_cell, but any singular point inside the closure of the cell
// triggers geometric grading toward it: the cell is split into subtriangles
// with the singular point as a vertex, and each is integrated over a
// geometric sequence of annular layers plus an innermost shrunk triangle.
double integrate_cell_graded(const Mesh& mesh, int cell, const ScalarField& f,
                             const QuadRule& rule,
                             const std::vector<Vec2>& singular,
                             const GradedOptions& opt = GradedOptions{});

double integrate_triangle_graded(Vec2 a, Vec2 b, Vec2 c, Vec2 zs,
                                 const ScalarField& f, const QuadRule& rule,
                                 const GradedOptions& opt = GradedOptions{});

// physical quadrature points with absolute weights (they sum to the cell
// area); the graded variant kicks in when a singular point meets the cell
struct WeightedPoint {
  Vec2 x;
  double w = 0.0;
};
std::vector<WeightedPoint> cell_quadrature_points(
    const Mesh& mesh, int cell, const QuadRule& rule,
    const std::vector<Vec2>& singular = {},
    const GradedOptions& opt = GradedOptions{});

// Polar integration over a disc, radially graded toward the center so that
// weights with a center singularity integrate accurately. Sample points stay
// strictly inside the punctured disc.
struct BallQuadOptions {
  int n_radial = 6;    // Gauss points per radial layer
  int n_angular = 96;
  int levels = 40;     // geometric layers toward the center, ratio 1/2
  bool check_divergence = false;
};
double integrate_ball(const ScalarField& f, Vec2 center, double radius,
                      const BallQuadOptions& opt = BallQuadOptions{});

}  // namespace stokeslab
