#pragma once

#include <cmath>

#include "sweep/errors.hpp"

namespace sweep {

/// Uniform grid t_i = i*T/n on [0, T]. Nodes are computed directly from the
/// index, never accumulated, so node(i) is reproducible across solves.
class TimeGrid {
 public:
  TimeGrid(double horizon, int steps) : horizon_(horizon), steps_(steps) {
    if (!(std::isfinite(horizon) && horizon > 0.0))
      throw ValidationError("horizon: must be finite and positive");
    if (steps < 1) throw ValidationError("steps: must be >= 1");
  }

  double horizon() const { return horizon_; }
  int steps() const { return steps_; }
  int node_count() const { return steps_ + 1; }
  double step_size() const { return horizon_ / steps_; }
  double node(int i) const {
    return (static_cast<double>(i) * horizon_) / steps_;
  }

  bool operator==(const TimeGrid& other) const {
    return horizon_ == other.horizon_ && steps_ == other.steps_;
  }

 private:
  double horizon_;
  int steps_;
};

}  // namespace sweep
