#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "stokeslab/integrate.hpp"
#include "stokeslab/mesh.hpp"
#include "stokeslab/weights.hpp"

using namespace stokeslab;

namespace {

std::vector<Vec2> sample_points(int n, unsigned seed = 99) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  std::vector<Vec2> out;
  for (int k = 0; k < n; ++k) out.push_back({u(gen), u(gen)});
  return out;
}

}  // namespace

TEST_CASE("pointwise evaluation of the weight grammar") {
  const Vec2 z{0.5, 0.5};
  CHECK(WeightSpec::constant(3.5)({0.1, 0.9}) == doctest::Approx(3.5));

  const WeightSpec w = WeightSpec::dist_power(z, 1.5);
  CHECK(w({0.5, 0.75}) == doctest::Approx(std::pow(0.25, 1.5)));
  CHECK(w(z) == 0.0);

  const WeightSpec neg = WeightSpec::dist_power(z, -1.0);
  CHECK(neg({0.5, 0.75}) == doctest::Approx(4.0));
  CHECK(std::isinf(neg(z)));

  // multi-point distance uses the nearest point of the set
  const WeightSpec multi =
      WeightSpec::dist_power({{0.0, 0.0}, {1.0, 1.0}}, 2.0);
  CHECK(multi({0.1, 0.0}) == doctest::Approx(0.01));
  CHECK(multi({0.9, 1.0}) == doctest::Approx(0.01));

  // segment distance: perpendicular inside the footprint, endpoint outside
  const WeightSpec seg =
      WeightSpec::dist_power_segment({0.25, 0.5}, {0.75, 0.5}, 1.0);
  CHECK(seg({0.5, 0.8}) == doctest::Approx(0.3));
  CHECK(seg({0.95, 0.5}) == doctest::Approx(0.2));
  CHECK(seg({1.0, 1.0}) == doctest::Approx(dist({1.0, 1.0}, {0.75, 0.5})));

  const WeightSpec nat = WeightSpec::natterer(z, 2.0, 0.125);
  const double kh = 2.0 * 0.125;
  CHECK(nat(z) == doctest::Approx(kh));
  CHECK(nat({0.5, 0.9}) == doctest::Approx(std::hypot(0.4, kh)));

  const WeightSpec conj = WeightSpec::conjugate(w, 3.0);
  for (const Vec2& x : sample_points(10))
    CHECK(conj(x) == doctest::Approx(std::pow(w(x), 1.0 / (1.0 - 3.0)))
                         .epsilon(1e-13));

  const WeightSpec pw = WeightSpec::power(nat, -2.5);
  for (const Vec2& x : sample_points(10))
    CHECK(pw(x) == doctest::Approx(std::pow(nat(x), -2.5)).epsilon(1e-13));
}

TEST_CASE("conjugation is an involution") {
  const WeightSpec w = WeightSpec::dist_power({0.3, 0.6}, 1.2);
  for (double p : {1.5, 2.0, 4.0}) {
    const double pc = p / (p - 1.0);
    const WeightSpec back =
        WeightSpec::conjugate(WeightSpec::conjugate(w, p), pc);
    for (const Vec2& x : sample_points(20))
      CHECK(back(x) == doctest::Approx(w(x)).epsilon(1e-12));
  }
  // conjugation at p = 2 is pointwise inversion
  const WeightSpec inv = WeightSpec::conjugate(w, 2.0);
  for (const Vec2& x : sample_points(10))
    CHECK(inv(x) * w(x) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("admissible exponent ranges") {
  const ApRange r = ap_admissible_range(2, 0, 2.0);
  CHECK(r.lo == doctest::Approx(-2.0));
  CHECK(r.hi == doctest::Approx(2.0));
  CHECK(r.contains(1.0));
  CHECK(r.contains(-1.9));
  CHECK_FALSE(r.contains(2.0));
  CHECK_FALSE(r.contains(-2.0));

  const ApRange seg = ap_admissible_range(2, 1, 3.0);
  CHECK(seg.lo == doctest::Approx(-1.0));
  CHECK(seg.hi == doctest::Approx(2.0));

  const ApRange p15 = ap_admissible_range(2, 0, 1.5);
  CHECK(p15.hi == doctest::Approx(1.0));
}

TEST_CASE("A_p constant estimate") {
  const Rect domain{};
  const auto balls = default_ball_family(domain, {{0.5, 0.5}}, 1.0 / 32.0);
  REQUIRE(balls.size() > 10);
  for (const Ball& b : balls) {
    CHECK(b.radius > 0.0);
    CHECK(b.radius <= domain.diameter() * (1.0 + 1e-12));
  }

  // constants have A_p constant exactly 1
  CHECK(estimate_ap_constant(WeightSpec::constant(7.0), 2.0, balls) ==
        doctest::Approx(1.0).epsilon(1e-9));

  // the estimate is a sup of Jensen-type products, so it is >= 1
  const WeightSpec w = WeightSpec::dist_power({0.5, 0.5}, 1.0);
  const double est = estimate_ap_constant(w, 2.0, balls);
  CHECK(est >= 1.0);
  CHECK(est < 50.0);

  // closed form on a ball centered at the singularity: averages of d^a over
  // B(z,r) equal 2 r^a/(2+a), so the product is 4/((2+a)(2-a)) at p = 2
  const std::vector<Ball> centered{{{0.5, 0.5}, 0.25}};
  for (double a : {0.5, 1.0, 1.5}) {
    const double exact = 4.0 / ((2.0 + a) * (2.0 - a));
    CHECK(estimate_ap_constant(WeightSpec::dist_power({0.5, 0.5}, a), 2.0,
                               centered) ==
          doctest::Approx(exact).epsilon(1e-6));
  }

  // exponents near the admissible boundary blow the estimate up; it is a
  // lower bound (the conjugate integrand barely converges at a = 1.99 and
  // the grading truncates part of its mass), so only the contrast is pinned
  const double mid = estimate_ap_constant(
      WeightSpec::dist_power({0.5, 0.5}, 1.0), 2.0, balls);
  const double inside = estimate_ap_constant(
      WeightSpec::dist_power({0.5, 0.5}, 1.5), 2.0, balls);
  const double outside = estimate_ap_constant(
      WeightSpec::dist_power({0.5, 0.5}, 1.99), 2.0, balls);
  CHECK(mid < inside);
  CHECK(outside > 5.0 * inside);
  CHECK(outside > 15.0);
}

TEST_CASE("conjugate weight has the dual A_p constant on the same balls") {
  // A_{p'}(w^{1/(1-p)}) = A_p(w)^{1/(p-1)} holds ball by ball, hence for the
  // sampled sup over any fixed family
  const WeightSpec w = WeightSpec::dist_power({0.4, 0.55}, 0.8);
  const auto balls = default_ball_family(Rect{}, {{0.4, 0.55}}, 1.0 / 16.0);
  for (double p : {1.5, 2.0, 3.0}) {
    const double pc = p / (p - 1.0);
    const double direct = estimate_ap_constant(w, p, balls);
    const double dual =
        estimate_ap_constant(WeightSpec::conjugate(w, p), pc, balls);
    CHECK(std::pow(dual, p - 1.0) == doctest::Approx(direct).epsilon(1e-6));
  }
}

TEST_CASE("weight measures against closed forms") {
  const Mesh mesh = build_structured_mesh(Pattern::CrissCross, 2);

  // constant weight integrates to the area
  double area = 0.0;
  for (int t = 0; t < mesh.nc(); ++t)
    area += weight_measure_cell(WeightSpec::constant(2.0), mesh, t);
  CHECK(area == doctest::Approx(2.0).epsilon(1e-12));

  // dist^-1 about the center reproduces the square closed form
  const WeightSpec w = WeightSpec::dist_power({0.5, 0.5}, -1.0);
  double total = 0.0;
  for (int t = 0; t < mesh.nc(); ++t)
    total += weight_measure_cell(w, mesh, t, 14, 30);
  CHECK(total ==
        doctest::Approx(4.0 * std::log(1.0 + std::sqrt(2.0))).epsilon(1e-8));

  // ball measure of dist^alpha centered at the singularity
  for (double a : {1.0, -0.5}) {
    const Ball b{{0.5, 0.5}, 0.2};
    const double exact =
        2.0 * std::numbers::pi * std::pow(0.2, 2.0 + a) / (2.0 + a);
    CHECK(weight_measure_ball(WeightSpec::dist_power({0.5, 0.5}, a), b) ==
          doctest::Approx(exact).epsilon(1e-8));
  }

  // non-integrable exponent is rejected rather than returning a finite lie
  const WeightSpec bad = WeightSpec::dist_power({0.5, 0.5}, -2.0);
  const int host = locate_point(mesh, {0.5, 0.5});
  CHECK_THROWS_AS(weight_measure_cell(bad, mesh, host, 6, 12),
                  std::domain_error);
  CHECK_THROWS_AS(weight_measure_ball(bad, Ball{{0.5, 0.5}, 0.2}),
                  std::domain_error);
}

TEST_CASE("mesh-size binding") {
  const WeightSpec unbound = WeightSpec::natterer({0.5, 0.5}, 2.0);
  CHECK(unbound.has_unbound_mesh_size());
  CHECK_THROWS_AS(unbound({0.25, 0.25}), std::logic_error);

  const WeightSpec bound = unbound.bind_mesh_size(0.25);
  CHECK_FALSE(bound.has_unbound_mesh_size());
  CHECK(bound({0.5, 0.5}) == doctest::Approx(0.5));

  // binding proceeds through wrappers
  const WeightSpec wrapped =
      WeightSpec::power(WeightSpec::conjugate(unbound, 2.0), 3.0);
  CHECK(wrapped.has_unbound_mesh_size());
  const WeightSpec wb = wrapped.bind_mesh_size(0.25);
  CHECK_FALSE(wb.has_unbound_mesh_size());
  CHECK(wb({0.5, 0.5}) == doctest::Approx(std::pow(0.5, -3.0)));

  // constants and distance powers never carry a mesh size
  CHECK_FALSE(WeightSpec::constant(1.0).has_unbound_mesh_size());
  CHECK_FALSE(
      WeightSpec::dist_power({0.5, 0.5}, 1.0).has_unbound_mesh_size());
}

TEST_CASE("singular points propagate through wrappers") {
  const Vec2 z{0.25, 0.75};
  CHECK(WeightSpec::constant(2.0).singular_points().empty());
  const auto pts = WeightSpec::dist_power(z, 1.0).singular_points();
  REQUIRE(pts.size() == 1);
  CHECK(dist(pts[0], z) == 0.0);
  const auto wrapped =
      WeightSpec::power(
          WeightSpec::conjugate(WeightSpec::dist_power(z, 1.0), 2.0), 2.0)
          .singular_points();
  REQUIRE(wrapped.size() == 1);
  CHECK(dist(wrapped[0], z) == 0.0);
  // the natterer kernel is strictly positive, so nothing to grade toward
  CHECK(WeightSpec::natterer(z, 2.0, 0.1).singular_points().empty());
}

TEST_CASE("spec strings round-trip through the parser") {
  const std::vector<std::string> specs = {
      "const:1",
      "const:2.5",
      "dist:0.5,0.5:1",
      "dist:0.25,0.75:-0.5",
      "natterer:0.5,0.5:2",
      "natterer:0.3,0.4:1.5",
      "conj:dist:0.5,0.5:1:2",
      "pow:natterer:0.5,0.5:2:-2.1",
  };
  for (const auto& s : specs) {
    const WeightSpec w = WeightSpec::parse(s);
    const WeightSpec back = WeightSpec::parse(w.to_string());
    WeightSpec wb = w.has_unbound_mesh_size() ? w.bind_mesh_size(0.1) : w;
    WeightSpec bb =
        back.has_unbound_mesh_size() ? back.bind_mesh_size(0.1) : back;
    for (const Vec2& x : sample_points(10))
      CHECK(wb(x) == doctest::Approx(bb(x)).epsilon(1e-13));
  }

  CHECK(WeightSpec::parse("const:2").kind() == WeightSpec::Kind::Constant);
  CHECK(WeightSpec::parse("dist:0.5,0.5:1").alpha() == doctest::Approx(1.0));
  CHECK(WeightSpec::parse("natterer:0.5,0.5:2").kappa() ==
        doctest::Approx(2.0));

  for (const char* bad :
       {"", "dist", "dist:0.5:1", "const:x", "mystery:1", "dist:0.5,0.5",
        "natterer:0.5,0.5", "const:-1", "const:0"}) {
    CHECK_THROWS_AS(WeightSpec::parse(bad), std::invalid_argument);
  }
}

TEST_CASE("natterer integral ratio stays bounded across levels") {
  // the ratio climbs toward its limit (2 pi / lambda) kappa^{-lambda} from
  // below; a disc of radius diam(domain) containing the domain makes that
  // limit a strict upper bound. Starting at n0 = 16 puts all levels close
  // enough to the limit that the spread stays within a factor 3.
  const double kappa = 2.0;
  std::vector<double> raw_coarsest;
  for (double lambda : {0.1, 0.2}) {
    const auto ratios = natterer_integral_ratio(lambda, kappa, 4, 16);
    REQUIRE(ratios.size() == 4);
    const double cap =
        2.0 * std::numbers::pi / lambda * std::pow(kappa, -lambda);
    double lo = ratios[0], hi = ratios[0];
    for (double r : ratios) {
      CHECK(r > 0.0);
      CHECK(r < cap);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    CHECK(hi / lo < 3.0);
    // undo the normalization: the raw integral at the coarsest level
    raw_coarsest.push_back(ratios[0] * std::pow(16.0, lambda));
  }
  // at a fixed level the raw integral grows with lambda, since the region
  // where sigma < 1 dominates
  CHECK(raw_coarsest[1] > raw_coarsest[0]);

  CHECK_THROWS_AS(natterer_integral_ratio(1.5, 2.0, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(natterer_integral_ratio(0.1, 0.5, 3),
                  std::invalid_argument);
  // kappa*h above the domain diameter violates the containment premise
  CHECK_THROWS_AS(natterer_integral_ratio(0.1, 24.0, 1, 4),
                  std::invalid_argument);
}

TEST_CASE("embedding condition ratio") {
  // for w = dist^a centered at x the ratio has the closed form
  // (r/R)^{p+2} (R^{2+a}/r^{2+a}) = (r/R)^{p-a}
  const Vec2 z{0.5, 0.5};
  for (double a : {0.5, 1.0}) {
    const WeightSpec w = WeightSpec::dist_power(z, a);
    const double val = embedding_condition_ratio(w, 2.0, z, 0.05, 0.2);
    CHECK(val == doctest::Approx(std::pow(0.25, 2.0 - a)).epsilon(1e-6));
  }
  // constants give exactly (r/R)^p
  CHECK(embedding_condition_ratio(WeightSpec::constant(4.0), 3.0, z, 0.1,
                                  0.4) ==
        doctest::Approx(std::pow(0.25, 3.0)).epsilon(1e-9));
}

TEST_CASE("restricted-class boundary collar check") {
  const Rect domain{};
  // interior singularity stays clear of a thin collar
  CHECK(ap_restricted_check(WeightSpec::dist_power({0.5, 0.5}, 1.0), domain,
                            0.05));
  // singular point on the boundary fails
  CHECK_FALSE(ap_restricted_check(WeightSpec::dist_power({0.5, 0.0}, 1.0),
                                  domain, 0.05));
  // singular point inside the collar fails
  CHECK_FALSE(ap_restricted_check(WeightSpec::dist_power({0.5, 0.03}, 1.0),
                                  domain, 0.05));
  // constants are fine
  CHECK(ap_restricted_check(WeightSpec::constant(2.0), domain, 0.05));
}

TEST_CASE("approximate maximal function dominates the average") {
  const WeightSpec w = WeightSpec::dist_power({0.5, 0.5}, 1.0);
  const Vec2 x{0.4, 0.4};
  const std::vector<double> sides{0.05, 0.1, 0.2};
  const double m = approx_maximal(w, x, sides);
  CHECK(m > 0.0);
  // the maximal value is at least the average over each candidate square
  for (double s : sides) {
    double avg = 0.0;
    const int n = 64;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        avg += w({x.x - 0.5 * s + (i + 0.5) * s / n,
                  x.y - 0.5 * s + (j + 0.5) * s / n});
    avg /= n * n;
    CHECK(m >= avg * (1.0 - 1e-6));
  }
  // for an increasing-from-x profile larger squares win, so m is attained
  // near the largest side; sanity only, not a sharp value
  CHECK(m < 2.0);
}
