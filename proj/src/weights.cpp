#include "stokeslab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace stokeslab {

struct WeightSpec::Node {
  Kind kind = Kind::Constant;
  double c = 1.0;          // Constant
  std::vector<Vec2> pts;   // DistPower point set or segment endpoints
  bool segment = false;
  double alpha = 0.0;      // DistPower
  Vec2 y;                  // Natterer
  double kappa = 0.0;
  std::optional<double> h;
  double p = 0.0;          // Conjugate
  double s = 0.0;          // Power
  std::shared_ptr<const Node> inner;
};

WeightSpec WeightSpec::constant(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("constant weight must be > 0");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->c = c;
  return WeightSpec(n);
}

WeightSpec WeightSpec::dist_power(Vec2 z, double alpha) {
  return dist_power(std::vector<Vec2>{z}, alpha);
}

WeightSpec WeightSpec::dist_power(std::vector<Vec2> points, double alpha) {
  if (points.empty())
    throw std::invalid_argument("dist_power needs a nonempty point set");
  auto n = std::make_shared<Node>();
  n->kind = Kind::DistPower;
  n->pts = std::move(points);
  n->alpha = alpha;
  return WeightSpec(n);
}

WeightSpec WeightSpec::dist_power_segment(Vec2 a, Vec2 b, double alpha) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::DistPower;
  n->pts = {a, b};
  n->segment = true;
  n->alpha = alpha;
  return WeightSpec(n);
}

WeightSpec WeightSpec::natterer(Vec2 y, double kappa, std::optional<double> h) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Natterer;
  n->y = y;
  n->kappa = kappa;
  n->h = h;
  return WeightSpec(n);
}

WeightSpec WeightSpec::conjugate(const WeightSpec& inner, double p) {
  if (!(p > 1.0))
    throw std::invalid_argument("conjugate weight needs p > 1");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Conjugate;
  n->p = p;
  n->inner = inner.node_;
  return WeightSpec(n);
}

WeightSpec WeightSpec::power(const WeightSpec& inner, double s) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Power;
  n->s = s;
  n->inner = inner.node_;
  return WeightSpec(n);
}

namespace {

double point_segment_dist(Vec2 x, Vec2 a, Vec2 b) {
  Vec2 ab = b - a;
  double t = dot(x - a, ab) / std::max(dot(ab, ab), 1e-300);
  t = std::clamp(t, 0.0, 1.0);
  return dist(x, a + t * ab);
}

}  // namespace

double WeightSpec::eval(Vec2 x) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Constant:
      return n.c;
    case Kind::DistPower: {
      double d;
      if (n.segment) {
        d = point_segment_dist(x, n.pts[0], n.pts[1]);
      } else {
        d = std::numeric_limits<double>::infinity();
        for (const Vec2& z : n.pts) d = std::min(d, dist(x, z));
      }
      if (d == 0.0 && n.alpha < 0.0)
        return std::numeric_limits<double>::infinity();
      return std::pow(d, n.alpha);
    }
    case Kind::Natterer: {
      if (!n.h)
        throw std::logic_error(
            "natterer weight evaluated with unbound mesh size");
      double kh = n.kappa * *n.h;
      Vec2 r = x - n.y;
      return std::sqrt(dot(r, r) + kh * kh);
    }
    case Kind::Conjugate:
      return std::pow(WeightSpec(n.inner).eval(x), 1.0 / (1.0 - n.p));
    case Kind::Power:
      return std::pow(WeightSpec(n.inner).eval(x), n.s);
  }
  return 0.0;
}

WeightSpec::Kind WeightSpec::kind() const { return node_->kind; }
double WeightSpec::constant_value() const { return node_->c; }
double WeightSpec::alpha() const { return node_->alpha; }
int WeightSpec::k_dim() const { return node_->segment ? 1 : 0; }
double WeightSpec::kappa() const { return node_->kappa; }
Vec2 WeightSpec::natterer_center() const { return node_->y; }
double WeightSpec::conj_p() const { return node_->p; }
double WeightSpec::exponent() const { return node_->s; }
WeightSpec WeightSpec::inner() const { return WeightSpec(node_->inner); }

bool WeightSpec::has_unbound_mesh_size() const {
  const Node& n = *node_;
  if (n.kind == Kind::Natterer) return !n.h.has_value();
  if (n.inner) return WeightSpec(n.inner).has_unbound_mesh_size();
  return false;
}

WeightSpec WeightSpec::bind_mesh_size(double h) const {
  const Node& n = *node_;
  if (n.kind == Kind::Natterer && !n.h) {
    auto m = std::make_shared<Node>(n);
    m->h = h;
    return WeightSpec(m);
  }
  if (n.inner) {
    auto m = std::make_shared<Node>(n);
    m->inner = WeightSpec(n.inner).bind_mesh_size(h).node_;
    return WeightSpec(m);
  }
  return *this;
}

std::vector<Vec2> WeightSpec::singular_points() const {
  const Node& n = *node_;
  if (n.kind == Kind::DistPower && n.alpha != 0.0) {
    if (!n.segment) return n.pts;
    return {n.pts[0], 0.5 * (n.pts[0] + n.pts[1]), n.pts[1]};
  }
  if (n.inner) return WeightSpec(n.inner).singular_points();
  return {};
}

std::string WeightSpec::to_string() const {
  char buf[160];
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Constant:
      std::snprintf(buf, sizeof buf, "const:%.17g", n.c);
      return buf;
    case Kind::DistPower:
      std::snprintf(buf, sizeof buf, "dist:%.17g,%.17g:%.17g", n.pts[0].x,
                    n.pts[0].y, n.alpha);
      return buf;
    case Kind::Natterer:
      std::snprintf(buf, sizeof buf, "natterer:%.17g,%.17g:%.17g", n.y.x,
                    n.y.y, n.kappa);
      return buf;
    case Kind::Conjugate: {
      std::snprintf(buf, sizeof buf, ":%.17g", n.p);
      return "conj:" + WeightSpec(n.inner).to_string() + buf;
    }
    case Kind::Power: {
      std::snprintf(buf, sizeof buf, ":%.17g", n.s);
      return "pow:" + WeightSpec(n.inner).to_string() + buf;
    }
  }
  return {};
}

namespace {

double parse_num(const std::string& tok, const std::string& whole) {
  size_t used = 0;
  double v;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed weight spec '" + whole + "'");
  }
  if (used != tok.size())
    throw std::invalid_argument("malformed weight spec '" + whole + "'");
  return v;
}

Vec2 parse_point(const std::string& tok, const std::string& whole) {
  size_t comma = tok.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("malformed weight spec '" + whole + "'");
  return {parse_num(tok.substr(0, comma), whole),
          parse_num(tok.substr(comma + 1), whole)};
}

}  // namespace

WeightSpec WeightSpec::parse(const std::string& spec) {
  auto tail_split = [&](const std::string& s) {
    size_t colon = s.rfind(':');
    if (colon == std::string::npos || colon + 1 >= s.size() || colon == 0)
      throw std::invalid_argument("malformed weight spec '" + spec + "'");
    return std::pair<std::string, std::string>(s.substr(0, colon),
                                               s.substr(colon + 1));
  };
  if (spec.rfind("const:", 0) == 0)
    return constant(parse_num(spec.substr(6), spec));
  if (spec.rfind("dist:", 0) == 0) {
    auto [head, a] = tail_split(spec.substr(5));
    return dist_power(parse_point(head, spec), parse_num(a, spec));
  }
  if (spec.rfind("natterer:", 0) == 0) {
    auto [head, k] = tail_split(spec.substr(9));
    return natterer(parse_point(head, spec), parse_num(k, spec));
  }
  if (spec.rfind("conj:", 0) == 0) {
    auto [head, p] = tail_split(spec.substr(5));
    return conjugate(parse(head), parse_num(p, spec));
  }
  if (spec.rfind("pow:", 0) == 0) {
    auto [head, s] = tail_split(spec.substr(4));
    return power(parse(head), parse_num(s, spec));
  }
  throw std::invalid_argument("malformed weight spec '" + spec + "'");
}

ApRange ap_admissible_range(int d, int k, double p) {
  if (k < 0 || k >= d)
    throw std::invalid_argument("ap_admissible_range: need 0 <= k < d");
  if (!(p > 1.0))
    throw std::invalid_argument("ap_admissible_range: need p > 1");
  return {-(double)(d - k), (double)(d - k) * (p - 1.0)};
}

std::vector<Ball> default_ball_family(const Rect& domain,
                                      const std::vector<Vec2>& centers,
                                      double h_min) {
  std::vector<Ball> balls;
  double R = domain.diameter();
  std::vector<Vec2> cs = centers;
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      cs.push_back({domain.x0 + domain.width() * i / 4.0,
                    domain.y0 + domain.height() * j / 4.0});
  for (const Vec2& c : cs)
    for (double r = h_min; r <= R * (1.0 + 1e-12); r *= 2.0)
      balls.push_back({c, r});
  return balls;
}

double estimate_ap_constant(const WeightSpec& w, double p,
                            const std::vector<Ball>& balls,
                            const BallQuadOptions& opt) {
  if (!(p > 1.0))
    throw std::invalid_argument("estimate_ap_constant: need p > 1");
  WeightSpec wc = WeightSpec::conjugate(w, p);
  double best = 0.0;
  double pi = std::acos(-1.0);
  for (const Ball& b : balls) {
    double area = pi * b.radius * b.radius;
    BallQuadOptions o = opt;
    o.check_divergence = true;
    double avg_w = integrate_ball([&](Vec2 x) { return w.eval(x); }, b.center,
                                  b.radius, o) / area;
    double avg_wc = integrate_ball([&](Vec2 x) { return wc.eval(x); },
                                   b.center, b.radius, o) / area;
    best = std::max(best, avg_w * std::pow(avg_wc, p - 1.0));
  }
  return best;
}

double weight_measure_cell(const WeightSpec& w, const Mesh& mesh, int cell,
                           int quad_degree, int grading_levels) {
  GradedOptions opt;
  opt.levels = grading_levels;
  opt.check_divergence = true;
  return integrate_cell_graded(mesh, cell, [&](Vec2 x) { return w.eval(x); },
                               triangle_rule(quad_degree),
                               w.singular_points(), opt);
}

double weight_measure_ball(const WeightSpec& w, const Ball& ball) {
  BallQuadOptions opt;
  opt.check_divergence = true;
  return integrate_ball([&](Vec2 x) { return w.eval(x); }, ball.center,
                        ball.radius, opt);
}

double approx_maximal(const WeightSpec& w, Vec2 x,
                      const std::vector<double>& sides, int n_grid) {
  double best = 0.0;
  for (double s : sides) {
    double sum = 0.0;
    for (int i = 0; i < n_grid; ++i)
      for (int j = 0; j < n_grid; ++j) {
        Vec2 q{x.x - 0.5 * s + (i + 0.5) * s / n_grid,
               x.y - 0.5 * s + (j + 0.5) * s / n_grid};
        sum += w.eval(q);
      }
    best = std::max(best, sum / ((double)n_grid * n_grid));
  }
  return best;
}

std::vector<double> natterer_integral_ratio(double lambda, double kappa,
                                            int levels, int n0,
                                            Pattern pattern, Rect domain,
                                            std::vector<Vec2> y_samples) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("natterer_integral_ratio: need 0 < lambda < 1");
  if (!(kappa > 1.0))
    throw std::invalid_argument("natterer_integral_ratio: need kappa > 1");
  if (y_samples.empty())
    y_samples = {{domain.x0 + 0.5 * domain.width(),
                  domain.y0 + 0.5 * domain.height()},
                 {domain.x0 + 0.25 * domain.width(),
                  domain.y0 + 0.75 * domain.height()},
                 {domain.x0 + 0.9 * domain.width(),
                  domain.y0 + 0.1 * domain.height()}};
  std::vector<double> ratios;
  int n = n0;
  for (int l = 0; l < levels; ++l, n *= 2) {
    Mesh mesh = build_structured_mesh(pattern, n, domain);
    double h = mesh.h();
    if (kappa * h > domain.diameter())
      throw std::invalid_argument(
          "natterer_integral_ratio: kappa*h exceeds the domain diameter");
    double worst = 0.0;
    for (Vec2 y : y_samples) {
      double kh = kappa * h;
      auto f = [&](Vec2 x) {
        Vec2 r = x - y;
        return std::pow(dot(r, r) + kh * kh, -0.5 * (2.0 + lambda));
      };
      double total = 0.0;
      GradedOptions opt;
      opt.levels = 6;
      for (int t = 0; t < mesh.nc(); ++t)
        total += integrate_cell_graded(mesh, t, f, triangle_rule(8), {y}, opt);
      worst = std::max(worst, total / std::pow(h, -lambda));
    }
    ratios.push_back(worst);
  }
  return ratios;
}

double embedding_condition_ratio(const WeightSpec& w, double p, Vec2 x,
                                 double r, double R) {
  if (!(r > 0.0 && R > r))
    throw std::invalid_argument("embedding_condition_ratio: need 0 < r < R");
  double wr = weight_measure_ball(w, {x, r});
  double wR = weight_measure_ball(w, {x, R});
  return std::pow(r / R, p + 2.0) * wR / wr;
}

bool ap_restricted_check(const WeightSpec& w, const Rect& domain, double eps,
                         int n_samples) {
  auto boundary_dist = [&](Vec2 x) {
    return std::min(std::min(x.x - domain.x0, domain.x1 - x.x),
                    std::min(x.y - domain.y0, domain.y1 - x.y));
  };
  for (const Vec2& z : w.singular_points())
    if (boundary_dist(z) <= eps) return false;
  double minval = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n_samples; ++i)
    for (int j = 0; j <= n_samples; ++j) {
      Vec2 x{domain.x0 + domain.width() * i / n_samples,
             domain.y0 + domain.height() * j / n_samples};
      if (boundary_dist(x) >= eps) continue;
      double v = w.eval(x);
      if (!std::isfinite(v)) return false;
      minval = std::min(minval, v);
    }
  return minval > 0.0;
}

}  // namespace stokeslab
