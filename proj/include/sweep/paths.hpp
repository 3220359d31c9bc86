#pragma once

#include <vector>

#include "sweep/vec.hpp"

namespace sweep {

/// Scalar time path from the closed builtin family
///   constant(v) | linear(slope, offset) | sinusoid(amplitude, frequency,
///   phase, offset).
/// The family is restricted so the total variation and the interval extrema
/// have closed forms; audits never estimate a modulus.
class ScalarPath {
 public:
  enum class Kind { constant, linear, sinusoid };

  static ScalarPath constant(double value);
  static ScalarPath linear(double slope, double offset);
  static ScalarPath sinusoid(double amplitude, double frequency, double phase,
                             double offset = 0.0);

  Kind kind() const { return kind_; }
  double value(double t) const;
  double derivative(double t) const;

  /// Total variation of value() over [0, t], t >= 0. Exact for every kind.
  double total_variation(double t) const;

  double min_value(double lo, double hi) const;
  double max_value(double lo, double hi) const;
  double max_abs(double lo, double hi) const;

  /// Structurally constant (covers zero-amplitude or zero-frequency sinusoid).
  bool is_constant() const;

  /// Largest |value| over all of R; throws if unbounded (nonzero slope).
  double global_abs_bound() const;

  /// Path with value() shifted by delta.
  ScalarPath shifted(double delta) const;

  // field accessors for serialization
  double offset() const { return offset_; }
  double slope() const { return slope_; }
  double amplitude() const { return amplitude_; }
  double frequency() const { return frequency_; }
  double phase() const { return phase_; }

 private:
  ScalarPath() = default;

  Kind kind_ = Kind::constant;
  double offset_ = 0.0;
  double slope_ = 0.0;
  double amplitude_ = 0.0;
  double frequency_ = 0.0;
  double phase_ = 0.0;
};

/// Vector-valued path, one ScalarPath per coordinate.
///
/// arc_length(t) is the exact length of the curve on [0, t] whenever the
/// coordinate paths admit a closed form (all linear, or all sinusoids with a
/// shared frequency and phase); a tight adaptive quadrature covers the rest.
class MotionPath {
 public:
  MotionPath() = default;
  explicit MotionPath(std::vector<ScalarPath> coords);
  static MotionPath constant(const Vec& point);

  int dim() const { return static_cast<int>(coords_.size()); }
  Vec value(double t) const;
  Vec velocity(double t) const;
  double speed(double t) const;
  double arc_length(double t) const;
  bool is_constant() const;

  const std::vector<ScalarPath>& coords() const { return coords_; }

 private:
  enum class ArcForm { zero, constant_speed, common_sinusoid, numeric };

  std::vector<ScalarPath> coords_;
  ArcForm arc_form_ = ArcForm::zero;
  double arc_rate_ = 0.0;       // constant_speed: hypot of slopes
  double arc_amplitude_ = 0.0;  // common_sinusoid: hypot of amplitudes
  double arc_frequency_ = 0.0;
  double arc_phase_ = 0.0;
};

/// Antiderivative of |cos|: increasing, G(0) = 0, G(u + pi) = G(u) + 2.
double abs_cos_antiderivative(double u);

}  // namespace sweep
