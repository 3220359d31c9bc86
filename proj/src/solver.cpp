#include "sweep/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sweep {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void check_initial(const MovingSet& set, const Vec& x0, const char* name) {
  require_dim(x0, set.dim(), name);
  require_finite(x0, name);
  const double d = set.distance(0.0, x0);
  if (d > kFeasibilityTol)
    throw InfeasibleInitialState(std::string("infeasible initial state ") +
                                 name + ": distance to the set at t = 0 is " +
                                 fmt(d) + " (tolerance " + fmt(kFeasibilityTol) +
                                 ")");
}

[[noreturn]] void throw_tube_violation(int step, double t, double dist,
                                       double radius) {
  throw NonUniqueProjection(
      "step " + std::to_string(step) + " left the uniqueness tube: distance " +
          fmt(dist) + " >= prox radius " + fmt(radius) + " at t = " + fmt(t),
      t, dist, radius, step);
}

}  // namespace

FirstOrderScenario::FirstOrderScenario(SetPtr set, StatePerturbation g, Vec x0,
                                       TimeGrid grid)
    : set_(std::move(set)), g_(std::move(g)), x0_(std::move(x0)), grid_(grid) {
  if (g_.state_dim() != set_->dim())
    throw ValidationError("scenario: perturbation state dimension " +
                          std::to_string(g_.state_dim()) +
                          " does not match set dimension " +
                          std::to_string(set_->dim()));
  check_initial(*set_, x0_, "u0");
}

SecondOrderScenario::SecondOrderScenario(SetPtr K, Perturbation f, Vec x0,
                                         Vec u0, TimeGrid grid)
    : K_(std::move(K)),
      f_(std::move(f)),
      x0_(std::move(x0)),
      u0_(std::move(u0)),
      grid_(grid) {
  if (f_.dim() != K_->dim())
    throw ValidationError("scenario: perturbation dimension " +
                          std::to_string(f_.dim()) +
                          " does not match set dimension " +
                          std::to_string(K_->dim()));
  require_dim(x0_, K_->dim(), "x0");
  require_finite(x0_, "x0");
  check_initial(*K_, u0_, "u0");
}

Trajectory catching_up_first_order(const FirstOrderScenario& sc,
                                   Quadrature quadrature) {
  const TimeGrid& grid = sc.grid();
  const MovingSet& set = sc.set();
  const int n = grid.steps();
  const double h = grid.step_size();

  std::vector<Vec> states;
  states.reserve(static_cast<std::size_t>(n) + 1);
  states.push_back(sc.initial_state());

  for (int i = 0; i < n; ++i) {
    const double t = grid.node(i);
    const double t_next = grid.node(i + 1);
    const double t_eval = quadrature == Quadrature::midpoint ? t + 0.5 * h : t;
    const Vec g = sc.map().evaluate(t_eval, states.back());
    Vec y = states.back();
    for (std::size_t j = 0; j < y.size(); ++j) y[j] -= h * g[j];
    const double dist = set.distance(t_next, y);
    if (!(dist < set.prox_radius()))
      throw_tube_violation(i, t_next, dist, set.prox_radius());
    states.push_back(set.project(t_next, y));
  }
  return Trajectory{grid, std::move(states), {}};
}

Trajectory catching_up_second_order(const SecondOrderScenario& sc,
                                    Quadrature quadrature) {
  const TimeGrid& grid = sc.grid();
  const MovingSet& K = sc.set();
  const int n = grid.steps();
  const double h = grid.step_size();

  std::vector<Vec> u, x;
  u.reserve(static_cast<std::size_t>(n) + 1);
  x.reserve(static_cast<std::size_t>(n) + 1);
  u.push_back(sc.initial_velocity());
  x.push_back(sc.initial_position());

  for (int i = 0; i < n; ++i) {
    const double t = grid.node(i);
    const double t_next = grid.node(i + 1);
    const double t_eval = quadrature == Quadrature::midpoint ? t + 0.5 * h : t;
    const Vec f = sc.perturbation().evaluate(t_eval, x.back(), u.back());

    Vec u_pre = u.back();
    for (std::size_t j = 0; j < u_pre.size(); ++j) u_pre[j] -= h * f[j];
    const double dist = K.distance(t_next, u_pre);
    if (!(dist < K.prox_radius()))
      throw_tube_violation(i, t_next, dist, K.prox_radius());

    Vec x_next = x.back();
    const Vec& u_cur = u.back();
    for (std::size_t j = 0; j < x_next.size(); ++j) x_next[j] += h * u_cur[j];

    u.push_back(K.project(t_next, u_pre));
    x.push_back(std::move(x_next));
  }
  return Trajectory{grid, std::move(u), std::move(x)};
}

FirstOrderScenario reduce_second_to_first(const SecondOrderScenario& sc) {
  SetOptions opts;
  opts.horizon = sc.set().horizon();
  SetPtr product =
      make_product(sc.set_ptr(), static_cast<int>(sc.initial_position().size()),
                   opts);
  return FirstOrderScenario(
      std::move(product), lift_perturbation(sc.perturbation()),
      concat(sc.initial_velocity(), sc.initial_position()), sc.grid());
}

namespace {

Vec interpolate_nodes(const std::vector<Vec>& nodes, const TimeGrid& grid,
                      double t) {
  const double slack = 1e-9 * (1.0 + grid.horizon());
  if (!(std::isfinite(t)) || t < -slack || t > grid.horizon() + slack)
    throw ValidationError("interpolate: time outside horizon");
  const int n = grid.steps();
  int i = static_cast<int>(t / grid.step_size());
  i = std::clamp(i, 0, n - 1);
  const double t0 = grid.node(i);
  const double t1 = grid.node(i + 1);
  double lambda = (t - t0) / (t1 - t0);
  lambda = std::clamp(lambda, 0.0, 1.0);
  if (lambda == 0.0) return nodes[static_cast<std::size_t>(i)];
  if (lambda == 1.0) return nodes[static_cast<std::size_t>(i) + 1];
  const Vec& a = nodes[static_cast<std::size_t>(i)];
  const Vec& b = nodes[static_cast<std::size_t>(i) + 1];
  Vec out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j)
    out[j] = a[j] + lambda * (b[j] - a[j]);
  return out;
}

}  // namespace

Vec interpolate(const Trajectory& traj, double t) {
  return interpolate_nodes(traj.states, traj.grid, t);
}

Vec interpolate_position(const Trajectory& traj, double t) {
  if (!traj.second_order())
    throw ValidationError("interpolate_position: trajectory has no positions");
  return interpolate_nodes(traj.positions, traj.grid, t);
}

}  // namespace sweep
