#include <doctest.h>

#include <cmath>

#include "sweep/geometry.hpp"

using namespace sweep;

namespace {

// independent oracle: minimize |q - p| over a dense grid of set points
double grid_min_distance(const std::vector<Vec>& set_points, const Vec& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& q : set_points) best = std::min(best, distance(q, p));
  return best;
}

Vec grid_nearest(const std::vector<Vec>& set_points, const Vec& p) {
  Vec best;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& q : set_points) {
    const double d = distance(q, p);
    if (d < best_d) {
      best_d = d;
      best = q;
    }
  }
  return best;
}

// boundary of the half-space {u1 >= c} in 2d
std::vector<Vec> halfspace_boundary_grid(double c) {
  std::vector<Vec> pts;
  for (int i = -40000; i <= 40000; ++i) pts.push_back({c, i * 2.5e-4});
  return pts;
}

std::vector<Vec> circle_grid(double r) {
  std::vector<Vec> pts;
  const int n = 400000;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * 3.141592653589793 * i / n;
    pts.push_back({r * std::cos(a), r * std::sin(a)});
  }
  return pts;
}

SetPtr halfline_set() {  // K(t) = [t, inf)
  return make_half_space({1.0}, ScalarPath::linear(1.0, 0.0));
}

}  // namespace

TEST_CASE("half-space distance: feasible point, closed form vs oracle") {
  const SetPtr hs = make_half_space({1.0, 0.0}, ScalarPath::constant(1.0));
  CHECK(hs->distance(0.0, {3.0, 4.0}) == 0.0);

  // closed form (c - <e,p>)+ cross-checked against a dense boundary grid
  const double d = hs->distance(0.0, {0.0, 0.0});
  CHECK(d == 1.0);
  CHECK(d == doctest::Approx(grid_min_distance(halfspace_boundary_grid(1.0),
                                               {0.0, 0.0}))
                 .epsilon(1e-7));
}

TEST_CASE("half-space projection: closed form vs boundary-grid oracle") {
  const SetPtr hs = make_half_space({1.0, 0.0}, ScalarPath::linear(1.0, 0.0));
  const Vec feasible{2.0, 5.0};
  CHECK(hs->project(1.0, feasible) == feasible);

  const Vec q = hs->project(1.0, {0.0, 0.0});
  REQUIRE(q.size() == 2);
  CHECK(q[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(q[1] == doctest::Approx(0.0));
  const Vec oracle = grid_nearest(halfspace_boundary_grid(1.0), {0.0, 0.0});
  CHECK(distance(q, oracle) < 1e-3);
}

TEST_CASE("ball complement projection is radial") {
  const SetPtr bc =
      make_ball_complement(MotionPath::constant({0.0, 0.0}), 1.0);
  const Vec q = bc->project(0.0, {0.5, 0.0});
  CHECK(q[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(q[1] == 0.0);
  const Vec oracle = grid_nearest(circle_grid(1.0), {0.5, 0.0});
  CHECK(distance(q, oracle) < 1e-4);

  // feasible points are untouched
  const Vec far{2.0, 1.0};
  CHECK(bc->project(0.0, far) == far);

  // the center is equidistant from the whole boundary
  CHECK_THROWS_AS((void)bc->project(0.0, {0.0, 0.0}), NonUniqueProjection);
  CHECK(bc->prox_radius() == 1.0);
}

TEST_CASE("product set: additive squared distance and blockwise projection") {
  const SetPtr hs = make_half_space({1.0, 0.0}, ScalarPath::constant(1.0));
  const auto ps = make_product(hs, 1);
  CHECK(ps->dim() == 3);
  CHECK(ps->distance(0.0, {0.0, 0.0, 7.0}) == 1.0);

  const Vec q = ps->project(1.0, {0.0, 0.0, 7.0});
  const Vec qb = hs->project(1.0, {0.0, 0.0});
  CHECK(q[0] == qb[0]);
  CHECK(q[1] == qb[1]);
  CHECK(q[2] == 7.0);

  // fully feasible input is returned unchanged
  const Vec ok{2.0, -3.0, 5.0};
  CHECK(ps->project(0.0, ok) == ok);

  // prox radius of (complement R=1) x R^2 equals 1
  const auto pc = make_product(
      make_ball_complement(MotionPath::constant({0.0, 0.0}), 1.0), 2);
  CHECK(pc->prox_radius() == 1.0);
}

TEST_CASE("projection idempotence and distance consistency") {
  Rng rng(99);
  std::vector<SetPtr> sets = {
      make_half_space({0.6, -0.8}, ScalarPath::sinusoid(0.5, 2.0, 0.1, 0.3)),
      make_ball(MotionPath({ScalarPath::sinusoid(0.5, 1.0, 0.0, 0.0),
                            ScalarPath::constant(0.2)}),
                1.5),
      make_box({-1.0, 0.0}, {1.0, 2.0}),
      make_ball_complement(MotionPath::constant({0.3, -0.2}), 1.0),
      make_translated(make_box({-1.0, -1.0}, {1.0, 1.0}),
                      MotionPath({ScalarPath::linear(0.5, 0.0),
                                  ScalarPath::constant(0.0)})),
      make_product(make_half_space({1.0, 0.0}, ScalarPath::linear(1.0, 0.0)), 2),
  };
  for (const auto& set : sets) {
    for (int k = 0; k < 200; ++k) {
      const double t = uniform(rng, 0.0, 2.0);
      Vec p = add(set->sample_point(t, rng),
                  random_in_ball(rng, set->dim(),
                                 0.8 * std::min(set->safe_normal_radius(), 2.0)));
      const double d = set->distance(t, p);
      if (!(d < set->prox_radius())) continue;
      const Vec q = set->project(t, p);
      CHECK(set->project(t, q) == q);                    // exact idempotence
      CHECK(std::fabs(distance(q, p) - d) <= 1e-12);     // |P(p)-p| = d(p)
      CHECK(set->distance(t, q) == 0.0);                 // member exactly
    }
  }
}

TEST_CASE("dimension and horizon errors") {
  const SetPtr hs = make_half_space({1.0, 0.0}, ScalarPath::constant(0.0),
                                    {.horizon = Interval{0.0, 2.0}});
  CHECK_THROWS_AS((void)hs->distance(0.0, {1.0}), ValidationError);
  CHECK_THROWS_AS((void)hs->distance(2.5, {1.0, 1.0}), ValidationError);
  CHECK_THROWS_AS((void)hs->distance(0.0, {std::nan(""), 0.0}),
                  ValidationError);
  CHECK(hs->distance(2.0, {1.0, 1.0}) == 0.0);  // the endpoint is inside
}

TEST_CASE("prox margin is tight on the complement's sphere") {
  // base (1,0), inward normal (-1,0): on the unit circle the inequality
  // (1 - x1) <= ((1-x1)^2 + x2^2) / 2 holds with equality
  const Vec base{1.0, 0.0};
  const Vec normal{-1.0, 0.0};
  for (int i = 0; i < 64; ++i) {
    const double a = 2.0 * 3.141592653589793 * i / 64;
    const Vec x{std::cos(a), std::sin(a)};
    CHECK(std::fabs(prox_margin(1.0, base, normal, x)) <= 1e-12);
    // overstated radius doubles r, halving the rhs: violations for x1 < 1
    const double m2 = prox_margin(2.0, base, normal, x);
    if (x[0] < 1.0 - 1e-9) CHECK(m2 > 0.0);
  }
}

TEST_CASE("prox audit: convex sets have nonpositive margins") {
  const TimeGrid grid(1.0, 10);
  std::vector<SetPtr> convex = {
      make_half_space({1.0, 0.0}, ScalarPath::linear(1.0, 0.0)),
      make_ball(MotionPath::constant({0.0, 0.0}), 1.5),
      make_box({-1.0, -2.0}, {1.0, 2.0}),
  };
  for (const auto& set : convex) {
    const auto rep = prox_inequality_audit(*set, 0.5, 4000, kDefaultSeed);
    CHECK(rep.samples_checked >= 3000);
    CHECK(rep.worst_slack <= 0.0);
    CHECK(rep.violations.empty());
    CHECK(rep.violation_count == 0);
  }
}

TEST_CASE("prox audit: ball complement honest and overstated radii") {
  const auto honest =
      make_ball_complement(MotionPath::constant({0.0, 0.0}), 1.0);
  const auto rep = prox_inequality_audit(*honest, 0.0, 12000, kDefaultSeed);
  CHECK(rep.samples_checked >= 10000);
  CHECK(rep.worst_slack <= 1e-12);

  const auto overstated = make_ball_complement(
      MotionPath::constant({0.0, 0.0}), 1.0, {.prox_radius = 2.0});
  const auto bad = prox_inequality_audit(*overstated, 0.0, 12000, kDefaultSeed);
  CHECK(bad.violation_count > 0);
  CHECK(!bad.violations.empty());
  CHECK(bad.worst_slack > 0.0);
  // violations is empty iff worst_slack <= 0, margins recorded as lhs - rhs
  for (const auto& v : bad.violations)
    CHECK(v.lhs - v.rhs > 0.0);
}

TEST_CASE("variation audit: constant sets and canonical moduli") {
  const TimeGrid grid(2.0, 40);
  Rng rng(7);
  std::vector<Vec> probes;
  for (int i = 0; i < 30; ++i) probes.push_back(uniform_box(rng, 2, 5.0));

  // constant set: distances never move, ratio 0
  const SetPtr box = make_box({-1.0, -1.0}, {1.0, 1.0});
  CHECK(variation_audit(*box, grid, probes) == 0.0);

  // translate with m(t) = (t, 0) and a(t) = t: ratio <= 1
  const SetPtr tr = make_translated(
      box, MotionPath({ScalarPath::linear(1.0, 0.0), ScalarPath::constant(0.0)}));
  const double r_tr = variation_audit(*tr, grid, probes);
  CHECK(r_tr <= 1.0 + kVariationTol);
  CHECK(r_tr > 0.5);  // probes ahead of the motion move at full speed

  // half-space with offset sin t declared with the 1-Lipschitz modulus a(t)=t
  const SetPtr hs =
      make_half_space({1.0, 0.0}, ScalarPath::sinusoid(1.0, 1.0, 0.0, 0.0),
                      {.variation_modulus = ScalarPath::linear(1.0, 0.0)});
  CHECK(variation_audit(*hs, grid, probes) <= 1.0 + kVariationTol);

  // deliberately wrong (flat) modulus: infinity reported, not thrown
  const SetPtr bad =
      make_half_space({1.0, 0.0}, ScalarPath::linear(1.0, 0.0),
                      {.variation_modulus = ScalarPath::constant(0.0)});
  CHECK(std::isinf(variation_audit(*bad, grid, probes)));
}

TEST_CASE("variation audit: every builtin kind with its canonical modulus") {
  const TimeGrid grid(2.0, 50);
  std::vector<SetPtr> sets = {
      make_half_space({1.0, 0.0}, ScalarPath::linear(1.0, 0.0)),
      make_half_space({0.6, 0.8}, ScalarPath::sinusoid(0.7, 3.0, 0.2, 0.1)),
      make_ball(MotionPath({ScalarPath::linear(0.4, 0.0),
                            ScalarPath::linear(-0.3, 0.0)}),
                1.0),
      make_ball(MotionPath({ScalarPath::sinusoid(0.5, 2.0, 0.0, 0.0),
                            ScalarPath::constant(0.0)}),
                1.0),
      make_box({-1.0, -1.0}, {1.0, 1.0}),
      make_translated(make_box({-1.0, -1.0}, {1.0, 1.0}),
                      MotionPath({ScalarPath::linear(0.7, 0.0),
                                  ScalarPath::linear(0.2, 0.0)})),
      make_ball_complement(MotionPath({ScalarPath::sinusoid(0.4, 1.5, 0.3, 0.0),
                                       ScalarPath::constant(0.0)}),
                           1.0),
      make_product(make_half_space({1.0, 0.0}, ScalarPath::linear(1.0, 0.0)), 2),
  };
  for (const auto& set : sets) {
    const auto probes = variation_probes(*set, 40, kDefaultSeed);
    CHECK(variation_audit(*set, grid, probes) <= 1.0 + kVariationTol);
  }
}

TEST_CASE("product variation modulus and radius come from the block") {
  const SetPtr ball = make_ball(
      MotionPath({ScalarPath::sinusoid(0.5, 2.0, 0.0, 0.0),
                  ScalarPath::constant(0.0)}),
      1.0);
  const auto ps = make_product(ball, 3);
  for (double t : {0.0, 0.4, 1.3}) {
    CHECK(ps->variation_value(t) == ball->variation_value(t));
    CHECK(ps->variation_rate(t) == ball->variation_rate(t));
  }
  CHECK(std::isinf(ps->prox_radius()));
}

TEST_CASE("sample_point always lands in the set") {
  Rng rng(4242);
  std::vector<SetPtr> sets = {
      make_half_space({0.0, 1.0}, ScalarPath::sinusoid(0.5, 1.0, 0.0, -1.0)),
      make_ball(MotionPath::constant({1.0, -1.0}), 0.7),
      make_box({-1.0, -std::numeric_limits<double>::infinity()},
               {1.0, std::numeric_limits<double>::infinity()}),
      make_ball_complement(MotionPath::constant({0.0, 0.0}), 1.0),
      make_product(make_ball(MotionPath::constant({0.0, 0.0}), 1.0), 2),
  };
  for (const auto& set : sets)
    for (int k = 0; k < 500; ++k) {
      const double t = uniform(rng, 0.0, 1.0);
      CHECK(set->distance(t, set->sample_point(t, rng)) <= kFeasibilityTol);
    }
}
