#pragma once

#include <stdexcept>
#include <string>

namespace sweep {

/// Root of the library's error hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad inputs: dimension mismatches, malformed scenario files, infeasible data.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Initial state not contained in the set at t = 0.
class InfeasibleInitialState : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A solve that started from valid data and cannot continue.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Metric projection requested at or beyond the uniqueness tube boundary.
class NonUniqueProjection : public SolverError {
 public:
  NonUniqueProjection(const std::string& msg, double time, double distance,
                      double prox_radius, int step = -1)
      : SolverError(msg),
        time_(time),
        distance_(distance),
        prox_radius_(prox_radius),
        step_(step) {}

  double time() const { return time_; }
  double distance() const { return distance_; }
  double prox_radius() const { return prox_radius_; }
  /// Offending solver step, or -1 when thrown outside a solve.
  int step() const { return step_; }

 private:
  double time_;
  double distance_;
  double prox_radius_;
  int step_;
};

}  // namespace sweep
