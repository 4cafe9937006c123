#include "stokeslab/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace stokeslab {

namespace {

void push_orbit3(QuadRule& r, double a, double w) {
  double b = 1.0 - 2.0 * a;
  r.points.push_back({b, a, a});
  r.points.push_back({a, b, a});
  r.points.push_back({a, a, b});
  r.weights.insert(r.weights.end(), 3, w);
}

void push_orbit6(QuadRule& r, double a, double b, double w) {
  double c = 1.0 - a - b;
  r.points.push_back({a, b, c});
  r.points.push_back({a, c, b});
  r.points.push_back({b, a, c});
  r.points.push_back({b, c, a});
  r.points.push_back({c, a, b});
  r.points.push_back({c, b, a});
  r.weights.insert(r.weights.end(), 6, w);
}

QuadRule make_centroid() {
  QuadRule r;
  r.degree = 1;
  r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  r.weights.push_back(1.0);
  return r;
}

QuadRule make_deg2() {
  QuadRule r;
  r.degree = 2;
  push_orbit3(r, 1.0 / 6.0, 1.0 / 3.0);
  return r;
}

QuadRule make_deg4() {  // Dunavant, 6 points
  QuadRule r;
  r.degree = 4;
  push_orbit3(r, 0.445948490915965, 0.223381589678011);
  push_orbit3(r, 0.091576213509771, 0.109951743655322);
  return r;
}

QuadRule make_deg6() {  // Dunavant, 12 points
  QuadRule r;
  r.degree = 6;
  push_orbit3(r, 0.063089014491502, 0.050844906370207);
  push_orbit3(r, 0.249286745170910, 0.116786275726379);
  push_orbit6(r, 0.636502499121399, 0.310352451033785, 0.082851075618374);
  return r;
}

QuadRule make_vertex_midpoint() {
  QuadRule r;
  r.degree = 2;
  r.points.push_back({1, 0, 0});
  r.points.push_back({0, 1, 0});
  r.points.push_back({0, 0, 1});
  r.weights.insert(r.weights.end(), 3, 0.0);
  r.points.push_back({0, 0.5, 0.5});
  r.points.push_back({0.5, 0, 0.5});
  r.points.push_back({0.5, 0.5, 0});
  r.weights.insert(r.weights.end(), 3, 1.0 / 3.0);
  return r;
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k - 1, k) = J(k, k - 1) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    nodes[i] = 0.5 * (1.0 + es.eigenvalues()(i));        // map [-1,1] -> [0,1]
    double v0 = es.eigenvectors()(0, i);
    weights[i] = v0 * v0;  // 2*v0^2 on [-1,1], halved by the map
  }
}

QuadRule tensor_gauss_rule(int n) {
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  QuadRule r;
  r.degree = 2 * n - 2;
  // Duffy map (s,t) -> (s(1-t), st), Jacobian s; weights doubled so they are
  // area fractions of the reference triangle
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = x[i], t = x[j];
      double l1 = s * (1.0 - t), l2 = s * t;
      r.points.push_back({1.0 - l1 - l2, l1, l2});
      r.weights.push_back(2.0 * w[i] * w[j] * s);
    }
  return r;
}

const QuadRule& triangle_rule(int degree) {
  static const QuadRule deg1 = make_centroid();
  static const QuadRule deg2 = make_deg2();
  static const QuadRule deg4 = make_deg4();
  static const QuadRule deg6 = make_deg6();
  if (degree <= 1) return deg1;
  if (degree <= 2) return deg2;
  if (degree <= 4) return deg4;
  if (degree <= 6) return deg6;
  static std::map<int, QuadRule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  int n = (degree + 3) / 2;  // 2n-2 >= degree
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, tensor_gauss_rule(n)).first;
  return it->second;
}

const QuadRule& vertex_midpoint_rule() {
  static const QuadRule r = make_vertex_midpoint();
  return r;
}

double monomial_integral(int a, int b, int c) {
  // 2 |T| a! b! c! / (a+b+c+2)! with |T| = 1/2
  return std::exp(std::lgamma(a + 1.0) + std::lgamma(b + 1.0) +
                  std::lgamma(c + 1.0) - std::lgamma(a + b + c + 3.0));
}

}  // namespace stokeslab
