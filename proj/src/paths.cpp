#include "sweep/paths.hpp"

#include <algorithm>
#include <cmath>

#include "sweep/quadrature.hpp"

namespace sweep {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

double abs_cos_antiderivative(double u) {
  const double m = std::floor((u + kPi / 2.0) / kPi);
  const bool odd = std::fmod(std::fabs(m), 2.0) == 1.0;
  const double s = odd ? -std::sin(u) : std::sin(u);
  return 2.0 * m + s;
}

ScalarPath ScalarPath::constant(double value) {
  ScalarPath p;
  p.kind_ = Kind::constant;
  p.offset_ = value;
  return p;
}

ScalarPath ScalarPath::linear(double slope, double offset) {
  ScalarPath p;
  p.kind_ = Kind::linear;
  p.slope_ = slope;
  p.offset_ = offset;
  return p;
}

ScalarPath ScalarPath::sinusoid(double amplitude, double frequency,
                                double phase, double offset) {
  ScalarPath p;
  p.kind_ = Kind::sinusoid;
  p.amplitude_ = amplitude;
  p.frequency_ = frequency;
  p.phase_ = phase;
  p.offset_ = offset;
  return p;
}

double ScalarPath::value(double t) const {
  switch (kind_) {
    case Kind::constant:
      return offset_;
    case Kind::linear:
      return offset_ + slope_ * t;
    case Kind::sinusoid:
      return offset_ + amplitude_ * std::sin(frequency_ * t + phase_);
  }
  return offset_;
}

double ScalarPath::derivative(double t) const {
  switch (kind_) {
    case Kind::constant:
      return 0.0;
    case Kind::linear:
      return slope_;
    case Kind::sinusoid:
      return amplitude_ * frequency_ * std::cos(frequency_ * t + phase_);
  }
  return 0.0;
}

double ScalarPath::total_variation(double t) const {
  switch (kind_) {
    case Kind::constant:
      return 0.0;
    case Kind::linear:
      return std::fabs(slope_) * std::fabs(t);
    case Kind::sinusoid: {
      if (amplitude_ == 0.0 || frequency_ == 0.0) return 0.0;
      const double a = abs_cos_antiderivative(phase_);
      const double b = abs_cos_antiderivative(frequency_ * t + phase_);
      return std::fabs(amplitude_) * std::fabs(b - a);
    }
  }
  return 0.0;
}

namespace {

// Does u == target (mod 2*pi) occur inside [lo, hi]?
bool angle_in_range(double lo, double hi, double target) {
  if (lo > hi) std::swap(lo, hi);
  const double two_pi = 2.0 * kPi;
  const double k = std::ceil((lo - target) / two_pi);
  return target + k * two_pi <= hi;
}

}  // namespace

double ScalarPath::min_value(double lo, double hi) const {
  switch (kind_) {
    case Kind::constant:
      return offset_;
    case Kind::linear:
      return std::min(value(lo), value(hi));
    case Kind::sinusoid: {
      double m = std::min(value(lo), value(hi));
      if (amplitude_ == 0.0 || frequency_ == 0.0) return m;
      const double ulo = frequency_ * lo + phase_;
      const double uhi = frequency_ * hi + phase_;
      // trough of offset + A*sin(u): u = -pi/2 for A > 0, u = +pi/2 for A < 0
      const double trough = amplitude_ > 0.0 ? -kPi / 2.0 : kPi / 2.0;
      if (angle_in_range(ulo, uhi, trough)) m = std::min(m, offset_ - std::fabs(amplitude_));
      return m;
    }
  }
  return offset_;
}

double ScalarPath::max_value(double lo, double hi) const {
  switch (kind_) {
    case Kind::constant:
      return offset_;
    case Kind::linear:
      return std::max(value(lo), value(hi));
    case Kind::sinusoid: {
      double m = std::max(value(lo), value(hi));
      if (amplitude_ == 0.0 || frequency_ == 0.0) return m;
      const double ulo = frequency_ * lo + phase_;
      const double uhi = frequency_ * hi + phase_;
      const double crest = amplitude_ > 0.0 ? kPi / 2.0 : -kPi / 2.0;
      if (angle_in_range(ulo, uhi, crest)) m = std::max(m, offset_ + std::fabs(amplitude_));
      return m;
    }
  }
  return offset_;
}

double ScalarPath::max_abs(double lo, double hi) const {
  return std::max(std::fabs(min_value(lo, hi)), std::fabs(max_value(lo, hi)));
}

bool ScalarPath::is_constant() const {
  if (kind_ == Kind::constant) return true;
  if (kind_ == Kind::linear) return slope_ == 0.0;
  return amplitude_ == 0.0 || frequency_ == 0.0;
}

double ScalarPath::global_abs_bound() const {
  switch (kind_) {
    case Kind::constant:
      return std::fabs(offset_);
    case Kind::linear:
      if (slope_ != 0.0)
        throw ValidationError(
            "global_abs_bound: linear path with nonzero slope is unbounded");
      return std::fabs(offset_);
    case Kind::sinusoid:
      return std::fabs(offset_) + std::fabs(amplitude_);
  }
  return std::fabs(offset_);
}

ScalarPath ScalarPath::shifted(double delta) const {
  ScalarPath p = *this;
  p.offset_ += delta;
  return p;
}

MotionPath::MotionPath(std::vector<ScalarPath> coords)
    : coords_(std::move(coords)) {
  if (coords_.empty()) throw ValidationError("motion path: needs >= 1 coordinate");

  bool all_const = true;
  bool linear_only = true;
  bool sinusoid_only = true;
  double slope_sq = 0.0;
  double amp_sq = 0.0;
  bool have_wave = false;
  for (const auto& c : coords_) {
    if (c.is_constant()) continue;
    all_const = false;
    if (c.kind() == ScalarPath::Kind::linear) {
      sinusoid_only = false;
      slope_sq += c.slope() * c.slope();
    } else if (c.kind() == ScalarPath::Kind::sinusoid) {
      linear_only = false;
      if (!have_wave) {
        have_wave = true;
        arc_frequency_ = c.frequency();
        arc_phase_ = c.phase();
      } else if (c.frequency() != arc_frequency_ || c.phase() != arc_phase_) {
        sinusoid_only = false;
      }
      amp_sq += c.amplitude() * c.amplitude();
    }
  }

  if (all_const) {
    arc_form_ = ArcForm::zero;
  } else if (linear_only) {
    arc_form_ = ArcForm::constant_speed;
    arc_rate_ = std::sqrt(slope_sq);
  } else if (sinusoid_only) {
    arc_form_ = ArcForm::common_sinusoid;
    arc_amplitude_ = std::sqrt(amp_sq);
  } else {
    arc_form_ = ArcForm::numeric;
  }
}

MotionPath MotionPath::constant(const Vec& point) {
  std::vector<ScalarPath> coords;
  coords.reserve(point.size());
  for (double v : point) coords.push_back(ScalarPath::constant(v));
  return MotionPath(std::move(coords));
}

Vec MotionPath::value(double t) const {
  Vec out(coords_.size());
  for (std::size_t i = 0; i < coords_.size(); ++i) out[i] = coords_[i].value(t);
  return out;
}

Vec MotionPath::velocity(double t) const {
  Vec out(coords_.size());
  for (std::size_t i = 0; i < coords_.size(); ++i)
    out[i] = coords_[i].derivative(t);
  return out;
}

double MotionPath::speed(double t) const { return norm(velocity(t)); }

double MotionPath::arc_length(double t) const {
  switch (arc_form_) {
    case ArcForm::zero:
      return 0.0;
    case ArcForm::constant_speed:
      return arc_rate_ * std::fabs(t);
    case ArcForm::common_sinusoid: {
      const double a = abs_cos_antiderivative(arc_phase_);
      const double b = abs_cos_antiderivative(arc_frequency_ * t + arc_phase_);
      return arc_amplitude_ * std::fabs(b - a);
    }
    case ArcForm::numeric:
      return adaptive_simpson([this](double s) { return speed(s); }, 0.0, t,
                              1e-13);
  }
  return 0.0;
}

bool MotionPath::is_constant() const { return arc_form_ == ArcForm::zero; }

double composite_simpson(const std::function<double(double)>& f, double a,
                         double b, int intervals) {
  if (intervals < 2) intervals = 2;
  if (intervals % 2 != 0) ++intervals;
  const double h = (b - a) / intervals;
  double sum = f(a) + f(b);
  for (int i = 1; i < intervals; ++i)
    sum += f(a + h * i) * (i % 2 == 1 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

namespace {

double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                            double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace sweep
