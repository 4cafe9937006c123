#include "stokeslab/integrate.hpp"

#include <cmath>
#include <stdexcept>

namespace stokeslab {

double integrate_triangle(Vec2 a, Vec2 b, Vec2 c, const ScalarField& f,
                          const QuadRule& rule) {
  double area = 0.5 * std::abs(cross(b - a, c - a));
  double sum = 0.0;
  for (size_t q = 0; q < rule.points.size(); ++q) {
    const auto& l = rule.points[q];
    Vec2 x = l[0] * a + l[1] * b + l[2] * c;
    sum += rule.weights[q] * f(x);
  }
  return area * sum;
}

double integrate_cell(const Mesh& mesh, int cell, const ScalarField& f,
                      const QuadRule& rule) {
  return integrate_triangle(mesh.vertex(cell, 0), mesh.vertex(cell, 1),
                            mesh.vertex(cell, 2), f, rule);
}

double integrate_triangle_graded(Vec2 a, Vec2 b, Vec2 c, Vec2 zs,
                                 const ScalarField& f, const QuadRule& rule,
                                 const GradedOptions& opt) {
  // split into subtriangles (zs, p, q); degenerate ones (zs on a vertex or an
  // edge) drop out via the area filter
  Vec2 v[3] = {a, b, c};
  double diam = std::max({dist(a, b), dist(b, c), dist(c, a)});
  double area_tol = 1e-14 * diam * diam;
  double total = 0.0;
  std::vector<double> level_sums(opt.levels + 1, 0.0);
  // below this offset, points of the form zs + s*(p - zs) round onto zs
  // itself, so deeper grading samples the singularity instead of resolving it
  double off_floor = 1e-11 * (std::max(std::abs(zs.x), std::abs(zs.y)) + 1.0);
  for (int k = 0; k < 3; ++k) {
    Vec2 p = v[k], q = v[(k + 1) % 3];
    if (0.5 * std::abs(cross(p - zs, q - zs)) < area_tol) continue;
    double ray = std::min(dist(p, zs), dist(q, zs));
    double s_hi = 1.0;
    for (int l = 0; l < opt.levels; ++l) {
      double s_lo = s_hi * opt.ratio;
      if (s_lo * ray < off_floor) break;
      Vec2 p_hi = zs + s_hi * (p - zs), q_hi = zs + s_hi * (q - zs);
      Vec2 p_lo = zs + s_lo * (p - zs), q_lo = zs + s_lo * (q - zs);
      double part = integrate_triangle(p_lo, p_hi, q_hi, f, rule) +
                    integrate_triangle(p_lo, q_hi, q_lo, f, rule);
      level_sums[l] += part;
      s_hi = s_lo;
    }
    level_sums[opt.levels] +=
        integrate_triangle(zs, zs + s_hi * (p - zs), zs + s_hi * (q - zs), f,
                           rule);
  }
  for (double part : level_sums) total += part;
  if (opt.check_divergence && opt.levels >= 4) {
    // decaying level sums indicate an integrable singularity; constant or
    // growing tails do not converge under further grading. The band must
    // absorb cancellation noise from points sampled very close to zs.
    double tail2 = std::abs(level_sums[opt.levels - 1]);
    double tail1 = std::abs(level_sums[opt.levels - 2]);
    double tail0 = std::abs(level_sums[opt.levels - 3]);
    double scale = std::abs(total) + 1e-300;
    if (tail1 > 1e-10 * scale && tail2 >= tail1 * (1.0 - 1e-3) &&
        tail1 >= tail0 * (1.0 - 1e-3))
      throw std::domain_error(
          "integrate: integral does not converge under grading refinement");
  }
  return total;
}

namespace {

void push_triangle_points(Vec2 a, Vec2 b, Vec2 c, const QuadRule& rule,
                          std::vector<WeightedPoint>& out) {
  double area = 0.5 * std::abs(cross(b - a, c - a));
  for (size_t q = 0; q < rule.points.size(); ++q) {
    const auto& l = rule.points[q];
    out.push_back({l[0] * a + l[1] * b + l[2] * c, area * rule.weights[q]});
  }
}

}  // namespace

std::vector<WeightedPoint> cell_quadrature_points(
    const Mesh& mesh, int cell, const QuadRule& rule,
    const std::vector<Vec2>& singular, const GradedOptions& opt) {
  Vec2 a = mesh.vertex(cell, 0), b = mesh.vertex(cell, 1),
       c = mesh.vertex(cell, 2);
  std::vector<WeightedPoint> out;
  const Vec2* zs = nullptr;
  for (const Vec2& z : singular) {
    auto l = mesh.barycentric(cell, z);
    double tol = 1e-10;
    if (l[0] >= -tol && l[1] >= -tol && l[2] >= -tol) {
      zs = &z;
      break;
    }
  }
  if (!zs) {
    push_triangle_points(a, b, c, rule, out);
    return out;
  }
  Vec2 v[3] = {a, b, c};
  double diam = std::max({dist(a, b), dist(b, c), dist(c, a)});
  double area_tol = 1e-14 * diam * diam;
  for (int k = 0; k < 3; ++k) {
    Vec2 p = v[k], q = v[(k + 1) % 3];
    if (0.5 * std::abs(cross(p - *zs, q - *zs)) < area_tol) continue;
    double s_hi = 1.0;
    for (int l = 0; l < opt.levels; ++l) {
      double s_lo = s_hi * opt.ratio;
      Vec2 p_hi = *zs + s_hi * (p - *zs), q_hi = *zs + s_hi * (q - *zs);
      Vec2 p_lo = *zs + s_lo * (p - *zs), q_lo = *zs + s_lo * (q - *zs);
      push_triangle_points(p_lo, p_hi, q_hi, rule, out);
      push_triangle_points(p_lo, q_hi, q_lo, rule, out);
      s_hi = s_lo;
    }
    push_triangle_points(*zs, *zs + s_hi * (p - *zs), *zs + s_hi * (q - *zs),
                         rule, out);
  }
  return out;
}

double integrate_cell_graded(const Mesh& mesh, int cell, const ScalarField& f,
                             const QuadRule& rule,
                             const std::vector<Vec2>& singular,
                             const GradedOptions& opt) {
  Vec2 a = mesh.vertex(cell, 0), b = mesh.vertex(cell, 1),
       c = mesh.vertex(cell, 2);
  for (const Vec2& zs : singular) {
    auto l = mesh.barycentric(cell, zs);
    double tol = 1e-10;
    if (l[0] >= -tol && l[1] >= -tol && l[2] >= -tol)
      return integrate_triangle_graded(a, b, c, zs, f, rule, opt);
  }
  return integrate_triangle(a, b, c, f, rule);
}

double integrate_ball(const ScalarField& f, Vec2 center, double radius,
                      const BallQuadOptions& opt) {
  std::vector<double> gx, gw;
  gauss_legendre(opt.n_radial, gx, gw);
  double two_pi = 2.0 * std::acos(-1.0);
  double dtheta = two_pi / opt.n_angular;
  auto ring = [&](double r_lo, double r_hi) {
    double sum = 0.0;
    for (int i = 0; i < opt.n_radial; ++i) {
      double r = r_lo + (r_hi - r_lo) * gx[i];
      double wr = (r_hi - r_lo) * gw[i] * r;
      double asum = 0.0;
      for (int j = 0; j < opt.n_angular; ++j) {
        double th = (j + 0.5) * dtheta;
        asum += f({center.x + r * std::cos(th), center.y + r * std::sin(th)});
      }
      sum += wr * asum * dtheta;
    }
    return sum;
  };
  double total = 0.0;
  double r_hi = radius;
  std::vector<double> level_sums;
  for (int l = 0; l < opt.levels; ++l) {
    double r_lo = 0.5 * r_hi;
    level_sums.push_back(ring(r_lo, r_hi));
    total += level_sums.back();
    r_hi = r_lo;
  }
  level_sums.push_back(ring(0.0, r_hi));
  total += level_sums.back();
  if (opt.check_divergence && level_sums.size() >= 4) {
    // compare ring to ring only: the inner cap holds all remaining mass and
    // exceeds the last ring even for convergent, slowly decaying integrands
    size_t n = level_sums.size();
    double tail1 = std::abs(level_sums[n - 2]);
    double tail0 = std::abs(level_sums[n - 3]);
    double scale = std::abs(total) + 1e-300;
    if (tail1 > 1e-10 * scale && tail1 >= tail0 * (1.0 - 1e-3))
      throw std::domain_error(
          "integrate_ball: integral does not converge under grading refinement");
  }
  return total;
}

}  // namespace stokeslab
