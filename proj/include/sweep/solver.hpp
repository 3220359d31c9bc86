#pragma once

#include <vector>

#include "sweep/dynamics.hpp"
#include "sweep/geometry.hpp"
#include "sweep/time_grid.hpp"
#include "sweep/vec.hpp"

namespace sweep {

enum class Quadrature { left, midpoint };

/// First-order perturbed sweeping problem
///   -X'(t) in N_{C(t)}(X(t)) + g(t, X(t)),  X(0) = X0 in C(0).
class FirstOrderScenario {
 public:
  FirstOrderScenario(SetPtr set, StatePerturbation g, Vec x0, TimeGrid grid);

  const MovingSet& set() const { return *set_; }
  SetPtr set_ptr() const { return set_; }
  const StatePerturbation& map() const { return g_; }
  const Vec& initial_state() const { return x0_; }
  const TimeGrid& grid() const { return grid_; }

  FirstOrderScenario with_steps(int steps) const {
    return FirstOrderScenario(set_, g_, x0_, TimeGrid(grid_.horizon(), steps));
  }

 private:
  SetPtr set_;
  StatePerturbation g_;
  Vec x0_;
  TimeGrid grid_;
};

/// Second-order problem: velocity constrained to K(t),
///   -x''(t) in N_{K(t)}(x'(t)) + f(t, x(t), x'(t)),
///   x(0) = x0, x'(0) = u0 in K(0).
class SecondOrderScenario {
 public:
  SecondOrderScenario(SetPtr K, Perturbation f, Vec x0, Vec u0, TimeGrid grid);

  const MovingSet& set() const { return *K_; }
  SetPtr set_ptr() const { return K_; }
  const Perturbation& perturbation() const { return f_; }
  const Vec& initial_position() const { return x0_; }
  const Vec& initial_velocity() const { return u0_; }
  const TimeGrid& grid() const { return grid_; }

  SecondOrderScenario with_steps(int steps) const {
    return SecondOrderScenario(K_, f_, x0_, u0_, TimeGrid(grid_.horizon(), steps));
  }

 private:
  SetPtr K_;
  Perturbation f_;
  Vec x0_;
  Vec u0_;
  TimeGrid grid_;
};

/// Discrete solution nodes. For first-order solves `states` holds X_i; for
/// second-order solves it holds the velocities u_i and `positions` the x_i.
struct Trajectory {
  TimeGrid grid;
  std::vector<Vec> states;
  std::vector<Vec> positions;

  bool second_order() const { return !positions.empty(); }
};

/// Catching-up scheme: X_{i+1} = P_{C(t_{i+1})}(X_i - Q_i), where Q_i is the
/// left-rectangle (default) or time-midpoint quadrature of g over the step,
/// always evaluated at the frozen state X_i.
Trajectory catching_up_first_order(const FirstOrderScenario& sc,
                                   Quadrature quadrature = Quadrature::left);

/// Catching-up scheme for the second-order problem:
///   u_{i+1} = P_{K(t_{i+1})}(u_i - Q_i),   x_{i+1} = x_i + h u_i,
/// with Q_i the quadrature of f(., x_i, u_i).
Trajectory catching_up_second_order(const SecondOrderScenario& sc,
                                    Quadrature quadrature = Quadrature::left);

/// The reduction: C(t) = K(t) x R^d, g = lift of f, X0 = (u0, x0).
/// Solving the result with catching_up_first_order reproduces the direct
/// second-order scheme node-by-node.
FirstOrderScenario reduce_second_to_first(const SecondOrderScenario& sc);

/// Piecewise-affine interpolation of the state nodes; exact at nodes.
Vec interpolate(const Trajectory& traj, double t);

/// Piecewise-affine interpolation of the position nodes (second order only).
Vec interpolate_position(const Trajectory& traj, double t);

}  // namespace sweep
