#pragma once

#include <vector>

#include "sweep/dynamics.hpp"
#include "sweep/solver.hpp"

namespace sweep {

/// Residual margins above this value flag a step as violating the discrete
/// normal-cone inclusion.
inline constexpr double kResidualFlagTol = 1e-9;

struct ResidualEntry {
  int node = 0;       // the iterate u_{i+1} the residual certifies
  double time = 0.0;  // t_{i+1}
  double xi_norm = 0.0;
  double margin = 0.0;  // worst sampled prox-inequality margin; <= 0 is clean
};

struct ResidualReport {
  double tol = 0.0;
  double max_violation = 0.0;  // max over steps of max(margin, 0)
  int worst_node = -1;
  std::vector<ResidualEntry> entries;  // one per step
  std::vector<int> flagged;            // nodes with margin > kResidualFlagTol
};

/// Checks the discrete inclusion -(u_{i+1}-u_i)/h - f(t_i, x_i, u_i) in
/// N_{K(t_{i+1})}(u_{i+1}) through the sampled prox inequality; |xi| <= tol
/// counts as membership (the zero vector lies in every normal cone).
/// `quadrature` selects the forcing evaluation time and must match the
/// scheme that produced the trajectory (left evaluates f at t_i).
ResidualReport residual_normal_cone(const Trajectory& traj,
                                    const SecondOrderScenario& sc, double tol,
                                    int samples_per_step = 256,
                                    std::uint64_t seed = kDefaultSeed,
                                    Quadrature quadrature = Quadrature::left);

/// Same residual for a first-order solve with forcing g(t_i, X_i).
ResidualReport residual_normal_cone_first(const Trajectory& traj,
                                          const FirstOrderScenario& sc,
                                          double tol,
                                          int samples_per_step = 256,
                                          std::uint64_t seed = kDefaultSeed,
                                          Quadrature quadrature = Quadrature::left);

struct BoundCheck {
  bool pass = false;
  double worst_f_margin = 0.0;     // max |g| - slack * (1+l) beta
  double worst_rate_margin = 0.0;  // max |dX/h + g| - slack * ((1+l) beta + sup|a'|)
  int worst_node = -1;
  double sup_state_norm = 0.0;  // in the scenario's state norm
};

/// Verifies the solution bounds at every node/step of a first-order solve.
BoundCheck bound_check(const Trajectory& traj, const BoundsReport& bounds,
                       const FirstOrderScenario& sc, double slack);

/// Reference solve on a refine_factor-times finer grid (refine_factor >= 2).
Trajectory fine_grid_oracle(const FirstOrderScenario& sc, int refine_factor,
                            Quadrature quadrature = Quadrature::left);
Trajectory fine_grid_oracle(const SecondOrderScenario& sc, int refine_factor,
                            Quadrature quadrature = Quadrature::left);

/// Sup over shared nodes of the state (and position) difference. The
/// reference grid must refine the trajectory grid by an integer factor.
double compare_with_oracle(const Trajectory& traj, const Trajectory& reference);

struct ConvergenceRow {
  int steps = 0;
  double h = 0.0;
  double error = 0.0;
  // pairwise data against the next (finer) row; unset on the last row
  double ratio = 0.0;
  double order = 0.0;
  bool has_order = false;
  bool exact = false;  // both errors of the pair below 1e-13
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;  // h halves from row to row
  int reference_steps = 0;
};

/// Solves at n, 2n, ..., 2^(levels-1) n and measures sup-node errors against
/// a reference at 2^levels * reference_refine * n steps of the same scheme.
ConvergenceTable convergence_study(const FirstOrderScenario& sc, int levels,
                                   int reference_refine,
                                   Quadrature quadrature = Quadrature::left);
ConvergenceTable convergence_study(const SecondOrderScenario& sc, int levels,
                                   int reference_refine,
                                   Quadrature quadrature = Quadrature::left);

}  // namespace sweep
