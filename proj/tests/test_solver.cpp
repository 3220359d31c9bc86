#include <doctest.h>

#include <cmath>

#include "sweep/analysis.hpp"
#include "sweep/solver.hpp"

using namespace sweep;

namespace {

SetPtr halfline() {  // K(t) = [t, inf)
  return make_half_space({1.0}, ScalarPath::linear(1.0, 0.0));
}

SetPtr free_line() {
  return make_box({-std::numeric_limits<double>::infinity()},
                  {std::numeric_limits<double>::infinity()});
}

// the five-scenario suite used across the equivalence/residual/bounds tests
std::vector<SecondOrderScenario> benchmark_suite(int steps) {
  std::vector<SecondOrderScenario> suite;

  // constant convex set, constant forcing
  suite.emplace_back(make_box({-1.0, -1.0}, {1.0, 1.0}),
                     Perturbation::affine({}, {}, {1.2, -0.9}),
                     Vec{0.0, 0.0}, Vec{0.0, 0.0}, TimeGrid(1.5, steps));

  // moving half-space, position coupling
  {
    Matrix A(2, 2);
    A.at(0, 0) = 0.2;
    A.at(1, 1) = 0.2;
    suite.emplace_back(make_half_space({1.0, 0.0}, ScalarPath::linear(1.0, 0.0)),
                       Perturbation::affine(A, {}, {}), Vec{0.5, -0.3},
                       Vec{0.0, 0.0}, TimeGrid(1.0, steps));
  }

  // moving ball, rotation + drift
  {
    Matrix A(2, 2);
    A.at(0, 1) = -0.4;
    A.at(1, 0) = 0.4;
    suite.emplace_back(
        make_ball(MotionPath({ScalarPath::sinusoid(0.5, 1.0, 0.0, 0.0),
                              ScalarPath::constant(0.0)}),
                  1.0),
        Perturbation::affine(A, {}, {0.9, 0.35}), Vec{0.0, 0.0},
        Vec{0.3, 0.1}, TimeGrid(1.5, steps));
  }

  // ball complement: pressed against the excluded ball, slides around it
  suite.emplace_back(make_ball_complement(MotionPath::constant({0.0, 0.0}), 1.0),
                     Perturbation::affine({}, {}, {0.55, -0.2}),
                     Vec{0.0, 0.0}, Vec{1.0, 0.0}, TimeGrid(1.2, steps));

  // affine f with sinusoidal forcing on a breathing half-space
  {
    Matrix A(2, 2);
    A.at(0, 1) = 0.3;
    A.at(1, 0) = -0.3;
    Matrix B(2, 2);
    B.at(0, 0) = -0.25;
    B.at(1, 1) = -0.25;
    suite.emplace_back(
        make_half_space({0.0, 1.0}, ScalarPath::sinusoid(0.3, 2.0, 0.0, -0.1)),
        Perturbation::affine(A, B, {0.4, 0.0},
                             ScalarPath::sinusoid(1.0, 1.0, 0.0, 0.0)),
        Vec{0.2, 0.0}, Vec{0.0, 0.0}, TimeGrid(2.0, steps));
  }
  return suite;
}

}  // namespace

TEST_CASE("time grid: direct node formula") {
  const TimeGrid grid(1.0, 50);
  CHECK(grid.node(0) == 0.0);
  CHECK(grid.node(50) == 1.0);
  CHECK(grid.step_size() == doctest::Approx(0.02));
  for (int i = 0; i <= 50; ++i)
    CHECK(grid.node(i) == (static_cast<double>(i) * 1.0) / 50);
  CHECK_THROWS_AS(TimeGrid(0.0, 10), ValidationError);
  CHECK_THROWS_AS(TimeGrid(1.0, 0), ValidationError);
}

TEST_CASE("first order: constant set and zero forcing is a fixed point") {
  const auto sc = FirstOrderScenario(
      make_box({-1.0, -1.0}, {1.0, 1.0}),
      StatePerturbation::plain(Perturbation::zero(2)), {0.25, -0.5},
      TimeGrid(1.0, 20));
  const auto traj = catching_up_first_order(sc);
  for (const auto& state : traj.states) CHECK(state == Vec{0.25, -0.5});
}

TEST_CASE("first order: swept by K(t) = [t, inf) exactly") {
  const auto sc =
      FirstOrderScenario(halfline(), StatePerturbation::plain(Perturbation::zero(1)),
                         {0.0}, TimeGrid(1.0, 50));
  const auto traj = catching_up_first_order(sc);
  for (int i = 0; i <= 50; ++i)
    CHECK(std::fabs(traj.states[static_cast<std::size_t>(i)][0] -
                    traj.grid.node(i)) <= 1e-13);

  // cross-check against a 100x finer solve at the shared nodes
  const auto fine = fine_grid_oracle(sc, 100);
  CHECK(compare_with_oracle(traj, fine) <= 1e-13);
}

TEST_CASE("first order: free space reduces to explicit Euler") {
  // g(t, x) = x, so X_{i+1} = (1 - h) X_i
  const auto sc = FirstOrderScenario(
      free_line(),
      StatePerturbation::plain(Perturbation::affine(Matrix::identity(1), {}, {})),
      {1.0}, TimeGrid(1.0, 40));
  const auto traj = catching_up_first_order(sc);
  const double h = sc.grid().step_size();
  for (int i = 0; i <= 40; ++i)
    CHECK(traj.states[static_cast<std::size_t>(i)][0] ==
          doctest::Approx(std::pow(1.0 - h, i)).epsilon(1e-12));
}

TEST_CASE("second order: constant set, zero perturbation") {
  const auto sc = SecondOrderScenario(
      make_box({-2.0, -2.0}, {2.0, 2.0}), Perturbation::zero(2), {1.0, -1.0},
      {0.5, 0.25}, TimeGrid(2.0, 32));
  const auto traj = catching_up_second_order(sc);
  for (int i = 0; i <= 32; ++i) {
    CHECK(traj.states[static_cast<std::size_t>(i)] == Vec{0.5, 0.25});
    const double t = traj.grid.node(i);
    CHECK(traj.positions[static_cast<std::size_t>(i)][0] ==
          doctest::Approx(1.0 + 0.5 * t).epsilon(1e-13));
    CHECK(traj.positions[static_cast<std::size_t>(i)][1] ==
          doctest::Approx(-1.0 + 0.25 * t).epsilon(1e-13));
  }
}

TEST_CASE("second order: exact half-line sweep and its discrete position error") {
  for (int n : {7, 50, 128, 500}) {
    const double T = 1.0;
    const auto sc = SecondOrderScenario(halfline(), Perturbation::zero(1),
                                        {0.0}, {0.0}, TimeGrid(T, n));
    const auto traj = catching_up_second_order(sc);
    const double h = T / n;
    for (int i = 0; i <= n; ++i)
      CHECK(std::fabs(traj.states[static_cast<std::size_t>(i)][0] -
                      traj.grid.node(i)) <= 1e-13);
    // x_n = sum h t_i = T^2/2 - T h/2 exactly
    const double xn = traj.positions.back()[0];
    CHECK(std::fabs(std::fabs(xn - T * T / 2.0) - T * h / 2.0) <= 1e-13);
  }
}

TEST_CASE("scheme equivalence: reduction reproduces the direct solve") {
  for (int steps : {50, 200}) {
    for (const auto& sc : benchmark_suite(steps)) {
      const auto direct = catching_up_second_order(sc, Quadrature::left);
      const auto reduced = reduce_second_to_first(sc);
      const auto lifted = catching_up_first_order(reduced, Quadrature::left);

      const std::size_t d = sc.initial_velocity().size();
      double sup = 0.0;
      for (int i = 0; i <= steps; ++i) {
        const Vec& state = lifted.states[static_cast<std::size_t>(i)];
        sup = std::max(sup, distance(head(state, d),
                                     direct.states[static_cast<std::size_t>(i)]));
      }
      CHECK(sup <= 1e-12);

      // the position block of the lifted state obeys x_{i+1} = x_i + h u_i
      // exactly (projection onto the free block is the identity)
      const double h = sc.grid().step_size();
      for (int i = 0; i < steps; ++i) {
        const Vec& cur = lifted.states[static_cast<std::size_t>(i)];
        const Vec& nxt = lifted.states[static_cast<std::size_t>(i) + 1];
        for (std::size_t j = 0; j < d; ++j)
          CHECK(nxt[d + j] == cur[d + j] + h * cur[j]);
      }
    }
  }
}

TEST_CASE("every node of every successful solve is feasible") {
  for (const auto& sc : benchmark_suite(80)) {
    const auto traj = catching_up_second_order(sc);
    for (int i = 0; i <= 80; ++i)
      CHECK(sc.set().distance(traj.grid.node(i),
                              traj.states[static_cast<std::size_t>(i)]) <= 1e-9);
  }
}

TEST_CASE("discrete velocity bound per step") {
  for (const auto& sc : benchmark_suite(60)) {
    const auto reduced = reduce_second_to_first(sc);
    const auto traj = catching_up_first_order(reduced);
    const double h = reduced.grid().step_size();
    for (int i = 0; i < 60; ++i) {
      const double t0 = reduced.grid().node(i);
      const double t1 = reduced.grid().node(i + 1);
      const Vec g = reduced.map().evaluate(t0, traj.states[static_cast<std::size_t>(i)]);
      const Vec q = scaled(g, h);
      Vec moved = sub(traj.states[static_cast<std::size_t>(i) + 1],
                      sub(traj.states[static_cast<std::size_t>(i)], q));
      const double da = std::fabs(reduced.set().variation_value(t1) -
                                  reduced.set().variation_value(t0));
      CHECK(norm(moved) <= da + norm(q) + 1e-9);
    }
  }
}

TEST_CASE("reduction: product construction carries the block's data") {
  const auto suite = benchmark_suite(10);
  const auto& sc = suite[2];  // moving ball in R^2
  const auto reduced = reduce_second_to_first(sc);
  CHECK(reduced.set().dim() == 4);
  CHECK(reduced.initial_state().size() == 4);
  CHECK(reduced.initial_state() ==
        concat(sc.initial_velocity(), sc.initial_position()));
  for (double t : {0.0, 0.7, 1.5}) {
    CHECK(reduced.set().variation_value(t) == sc.set().variation_value(t));
    CHECK(reduced.set().variation_rate(t) == sc.set().variation_rate(t));
  }
  CHECK(reduced.set().prox_radius() == sc.set().prox_radius());
  CHECK(reduced.map().is_lifted());
}

TEST_CASE("tube violation carries the offending step and distance") {
  // 1-d complement of (-0.5, 0.5) declared with the conservative radius 0.2;
  // a strong leftward force lands the pre-projection point at distance 0.3
  // from the set on the second step
  const auto sc = SecondOrderScenario(
      make_ball_complement(MotionPath::constant({0.0}), 0.5,
                           {.prox_radius = 0.2}),
      Perturbation::affine({}, {}, {5.0}), {0.0}, {1.2}, TimeGrid(1.0, 10));
  try {
    (void)catching_up_second_order(sc);
    FAIL("expected NonUniqueProjection");
  } catch (const NonUniqueProjection& e) {
    CHECK(e.step() == 1);
    CHECK(e.distance() >= e.prox_radius());
  }

  // projecting the excluded ball's center is ambiguous regardless of the
  // declared radius
  const auto bc = make_ball_complement(MotionPath::constant({0.0, 0.0}), 1.0,
                                       {.prox_radius = 2.0});
  CHECK_THROWS_AS((void)bc->project(0.0, {0.0, 0.0}), NonUniqueProjection);
}

TEST_CASE("infeasible initial velocity is rejected naming u0") {
  CHECK_THROWS_WITH_AS(
      SecondOrderScenario(make_box({0.0}, {1.0}), Perturbation::zero(1), {0.0},
                          {-0.001}, TimeGrid(1.0, 8)),
      doctest::Contains("u0"), InfeasibleInitialState);
}

TEST_CASE("interpolation: nodes, midpoints, affine reproduction") {
  const auto sc =
      FirstOrderScenario(halfline(), StatePerturbation::plain(Perturbation::zero(1)),
                         {0.0}, TimeGrid(1.0, 10));
  const auto traj = catching_up_first_order(sc);

  // node query returns the node value
  for (int i = 0; i <= 10; ++i)
    CHECK(interpolate(traj, traj.grid.node(i)) ==
          traj.states[static_cast<std::size_t>(i)]);

  // midpoint of two nodes is the mean
  const Vec mid = interpolate(traj, 0.15);
  CHECK(mid[0] == doctest::Approx(0.5 * (traj.states[1][0] + traj.states[2][0])));

  // u_i = t_i reproduces the identity in time
  for (double t : {0.03, 0.51, 0.997})
    CHECK(interpolate(traj, t)[0] == doctest::Approx(t).epsilon(1e-12));

  CHECK_THROWS_AS((void)interpolate(traj, 1.5), ValidationError);
  CHECK_THROWS_AS((void)interpolate_position(traj, 0.5), ValidationError);
}

TEST_CASE("grid refinement never worsens the error against a fine reference") {
  for (const auto& sc : benchmark_suite(40)) {
    const auto table = convergence_study(sc, 3, 4);  // reference 16x finest
    for (std::size_t k = 0; k + 1 < table.rows.size(); ++k)
      CHECK(table.rows[k + 1].error <= table.rows[k].error + 1e-9);
  }
}

TEST_CASE("midpoint quadrature stays consistent with the reduction") {
  const auto suite = benchmark_suite(64);
  const auto& sc = suite[4];
  const auto direct = catching_up_second_order(sc, Quadrature::midpoint);
  const auto lifted =
      catching_up_first_order(reduce_second_to_first(sc), Quadrature::midpoint);
  for (int i = 0; i <= 64; ++i)
    CHECK(distance(head(lifted.states[static_cast<std::size_t>(i)], 2),
                   direct.states[static_cast<std::size_t>(i)]) <= 1e-12);
}
