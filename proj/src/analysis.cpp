#include "sweep/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace sweep {

namespace {

void check_node_compatible(const Trajectory& traj, const TimeGrid& grid) {
  if (!(traj.grid == grid))
    throw ValidationError("trajectory grid does not match the scenario grid");
  if (traj.states.size() != static_cast<std::size_t>(grid.steps()) + 1)
    throw ValidationError("trajectory node count does not match its grid");
}

/// Worst sampled prox-inequality margin for xi at `point` in K(t): mixes
/// global set samples with local probes projected from around the point, so
/// spurious normals at interior or misplaced iterates are caught at every
/// scale down to the step size.
double membership_margin(const MovingSet& set, double t, const Vec& point,
                         const Vec& xi_unit, double step_scale, int n_samples,
                         Rng& rng) {
  const double r = set.prox_radius();
  double safe = 0.45 * set.safe_normal_radius();
  if (!std::isfinite(safe) || safe <= 0.0) safe = set.sampling_halfwidth();

  double worst = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < n_samples; ++k) {
    Vec z;
    if (k % 2 == 0) {
      z = set.sample_point(t, rng);
    } else {
      static constexpr double kScales[4] = {2.0, 0.5, 0.1, 0.01};
      const double scale =
          std::min(safe, kScales[(k / 2) % 4] * std::max(step_scale, 1e-6));
      const Vec q = add(point, random_in_ball(rng, set.dim(), scale));
      z = set.distance(t, q) <= kFeasibilityTol ? q : set.project(t, q);
    }
    worst = std::max(worst, prox_margin(r, point, xi_unit, z));
  }
  return worst;
}

ResidualReport residual_report(const MovingSet& set, const TimeGrid& grid,
                               const std::vector<Vec>& nodes,
                               const std::function<Vec(int)>& forcing_at,
                               double tol, int samples_per_step,
                               std::uint64_t seed) {
  Rng rng(seed);
  const int n = grid.steps();
  const double h = grid.step_size();

  ResidualReport rep;
  rep.tol = tol;
  rep.entries.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Vec f = forcing_at(i);
    const Vec& u0 = nodes[static_cast<std::size_t>(i)];
    const Vec& u1 = nodes[static_cast<std::size_t>(i) + 1];
    Vec xi(u0.size());
    for (std::size_t j = 0; j < xi.size(); ++j)
      xi[j] = -(u1[j] - u0[j]) / h - f[j];
    const double xin = norm(xi);

    ResidualEntry entry;
    entry.node = i + 1;
    entry.time = grid.node(i + 1);
    entry.xi_norm = xin;
    if (xin <= tol) {
      entry.margin = 0.0;
    } else {
      entry.margin = membership_margin(set, entry.time, u1,
                                       scaled(xi, 1.0 / xin), h,
                                       samples_per_step, rng);
    }
    if (entry.margin > kResidualFlagTol) rep.flagged.push_back(entry.node);
    const double violation = std::max(entry.margin, 0.0);
    if (violation > rep.max_violation) {
      rep.max_violation = violation;
      rep.worst_node = entry.node;
    }
    rep.entries.push_back(std::move(entry));
  }
  return rep;
}

}  // namespace

namespace {

double forcing_time(const TimeGrid& grid, int i, Quadrature quadrature) {
  return quadrature == Quadrature::midpoint
             ? grid.node(i) + 0.5 * grid.step_size()
             : grid.node(i);
}

}  // namespace

ResidualReport residual_normal_cone(const Trajectory& traj,
                                    const SecondOrderScenario& sc, double tol,
                                    int samples_per_step, std::uint64_t seed,
                                    Quadrature quadrature) {
  check_node_compatible(traj, sc.grid());
  if (!traj.second_order())
    throw ValidationError("residual_normal_cone: trajectory has no positions");
  return residual_report(
      sc.set(), sc.grid(), traj.states,
      [&](int i) {
        return sc.perturbation().evaluate(
            forcing_time(sc.grid(), i, quadrature),
            traj.positions[static_cast<std::size_t>(i)],
            traj.states[static_cast<std::size_t>(i)]);
      },
      tol, samples_per_step, seed);
}

ResidualReport residual_normal_cone_first(const Trajectory& traj,
                                          const FirstOrderScenario& sc,
                                          double tol, int samples_per_step,
                                          std::uint64_t seed,
                                          Quadrature quadrature) {
  check_node_compatible(traj, sc.grid());
  return residual_report(
      sc.set(), sc.grid(), traj.states,
      [&](int i) {
        return sc.map().evaluate(forcing_time(sc.grid(), i, quadrature),
                                 traj.states[static_cast<std::size_t>(i)]);
      },
      tol, samples_per_step, seed);
}

BoundCheck bound_check(const Trajectory& traj, const BoundsReport& bounds,
                       const FirstOrderScenario& sc, double slack) {
  check_node_compatible(traj, sc.grid());
  const TimeGrid& grid = sc.grid();
  const int n = grid.steps();
  const double h = grid.step_size();

  BoundCheck out;
  out.worst_f_margin = -std::numeric_limits<double>::infinity();
  out.worst_rate_margin = -std::numeric_limits<double>::infinity();

  for (int i = 0; i <= n; ++i) {
    const double t = grid.node(i);
    const Vec& X = traj.states[static_cast<std::size_t>(i)];
    out.sup_state_norm = std::max(out.sup_state_norm, sc.map().state_norm(X));
    const double margin =
        norm(sc.map().evaluate(t, X)) - slack * bounds.envelope_f(t);
    if (margin > out.worst_f_margin) {
      out.worst_f_margin = margin;
      if (margin > 0.0) out.worst_node = i;
    }
  }

  for (int i = 0; i < n; ++i) {
    const double t = grid.node(i);
    const Vec g = sc.map().evaluate(t, traj.states[static_cast<std::size_t>(i)]);
    const Vec& X0 = traj.states[static_cast<std::size_t>(i)];
    const Vec& X1 = traj.states[static_cast<std::size_t>(i) + 1];
    Vec res(X0.size());
    for (std::size_t j = 0; j < res.size(); ++j)
      res[j] = (X1[j] - X0[j]) / h + g[j];

    double rate_sup = 0.0;
    for (int k = 0; k <= 16; ++k)
      rate_sup = std::max(
          rate_sup, sc.set().variation_rate(t + (grid.node(i + 1) - t) * k / 16.0));

    const double margin =
        norm(res) - slack * (bounds.envelope_f(t) + rate_sup);
    if (margin > out.worst_rate_margin) {
      out.worst_rate_margin = margin;
      if (margin > 0.0) out.worst_node = i;
    }
  }

  out.pass = out.worst_f_margin <= 0.0 && out.worst_rate_margin <= 0.0;
  return out;
}

Trajectory fine_grid_oracle(const FirstOrderScenario& sc, int refine_factor,
                            Quadrature quadrature) {
  if (refine_factor < 2)
    throw ValidationError("fine_grid_oracle: refine_factor must be >= 2");
  return catching_up_first_order(
      sc.with_steps(sc.grid().steps() * refine_factor), quadrature);
}

Trajectory fine_grid_oracle(const SecondOrderScenario& sc, int refine_factor,
                            Quadrature quadrature) {
  if (refine_factor < 2)
    throw ValidationError("fine_grid_oracle: refine_factor must be >= 2");
  return catching_up_second_order(
      sc.with_steps(sc.grid().steps() * refine_factor), quadrature);
}

// sup over shared nodes of the state difference: the discrete C0 norm on the
// constrained variable (the velocity for second-order solves)
double compare_with_oracle(const Trajectory& traj, const Trajectory& reference) {
  const int n = traj.grid.steps();
  const int m = reference.grid.steps();
  if (m % n != 0)
    throw ValidationError(
        "compare_with_oracle: reference grid does not refine the trajectory "
        "grid");
  if (traj.second_order() != reference.second_order())
    throw ValidationError("compare_with_oracle: trajectory kinds differ");
  const int stride = m / n;
  double sup = 0.0;
  for (int i = 0; i <= n; ++i)
    sup = std::max(sup, distance(traj.states[static_cast<std::size_t>(i)],
                                 reference.states[static_cast<std::size_t>(i * stride)]));
  return sup;
}

namespace {

ConvergenceTable study_impl(double horizon, int base_steps, int levels,
                            int reference_refine,
                            const std::function<Trajectory(int)>& solve) {
  if (levels < 3)
    throw ValidationError("convergence_study: levels must be >= 3");
  if (reference_refine < 1)
    throw ValidationError("convergence_study: reference refine must be >= 1");

  ConvergenceTable table;
  table.reference_steps = (base_steps << levels) * reference_refine;
  const Trajectory reference = solve(table.reference_steps);

  std::vector<double> errors(static_cast<std::size_t>(levels));
  for (int k = 0; k < levels; ++k) {
    const int nk = base_steps << k;
    errors[static_cast<std::size_t>(k)] =
        compare_with_oracle(solve(nk), reference);
    ConvergenceRow row;
    row.steps = nk;
    row.h = horizon / nk;
    row.error = errors[static_cast<std::size_t>(k)];
    table.rows.push_back(row);
  }

  for (int k = 0; k + 1 < levels; ++k) {
    ConvergenceRow& row = table.rows[static_cast<std::size_t>(k)];
    const double e0 = errors[static_cast<std::size_t>(k)];
    const double e1 = errors[static_cast<std::size_t>(k) + 1];
    if (e0 < 1e-13 && e1 < 1e-13) {
      row.exact = true;  // below measurement noise; log2 would be meaningless
      continue;
    }
    row.ratio = e0 / e1;
    row.order = std::log2(row.ratio);
    row.has_order = true;
  }
  return table;
}

}  // namespace

ConvergenceTable convergence_study(const FirstOrderScenario& sc, int levels,
                                   int reference_refine, Quadrature quadrature) {
  return study_impl(sc.grid().horizon(), sc.grid().steps(), levels,
                    reference_refine, [&](int n) {
                      return catching_up_first_order(sc.with_steps(n), quadrature);
                    });
}

ConvergenceTable convergence_study(const SecondOrderScenario& sc, int levels,
                                   int reference_refine, Quadrature quadrature) {
  return study_impl(sc.grid().horizon(), sc.grid().steps(), levels,
                    reference_refine, [&](int n) {
                      return catching_up_second_order(sc.with_steps(n), quadrature);
                    });
}

}  // namespace sweep
