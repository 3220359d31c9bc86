#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sweep/paths.hpp"
#include "sweep/rng.hpp"
#include "sweep/time_grid.hpp"
#include "sweep/vec.hpp"

namespace sweep {

struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;  // row-major

  Matrix() = default;
  Matrix(int r, int c)
      : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

  static Matrix identity(int n);

  double& at(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  double at(int i, int j) const {
    return data[static_cast<std::size_t>(i) * cols + j];
  }
  bool empty() const { return rows == 0 || cols == 0; }

  Vec apply(const Vec& v) const;
  double frobenius() const;
};

/// Single-valued perturbation f(t, x, u) with a declared integrable growth
/// envelope c(t): the map is expected to satisfy
///   |f(t,x,u)| <= c(t) (1 + |x| + |u|),
/// which audit_growth falsifies by sampling when it does not hold.
class Perturbation {
 public:
  enum class Kind { zero, affine, trigonometric_forcing, componentwise_nonlinear };
  enum class Argument { position, velocity };
  enum class ScalarMap { sin, cos, tanh, square };

  static Perturbation zero(int dim);

  /// f(t,x,u) = coeff(t) * (A x + B u + b). Empty matrices mean zero blocks.
  /// A canonical constant envelope is derived from Frobenius norms when
  /// `growth` is omitted; an unbounded coeff then requires an explicit one.
  static Perturbation affine(Matrix A, Matrix B, Vec b,
                             ScalarPath time_coefficient = ScalarPath::constant(1.0),
                             std::optional<ScalarPath> growth = std::nullopt);

  /// f(t,x,u) = signal(t) * w.
  static Perturbation trigonometric_forcing(Vec w, ScalarPath signal,
                                            std::optional<ScalarPath> growth = std::nullopt);

  /// f_i(t,x,u) = amplitude * map(arg_i) with arg = x or u componentwise.
  /// `square` has no global envelope, so it requires an explicit one.
  static Perturbation componentwise(ScalarMap map, Argument argument,
                                    double amplitude, int dim,
                                    std::optional<ScalarPath> growth = std::nullopt);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  Vec evaluate(double t, const Vec& x, const Vec& u) const;
  const ScalarPath& growth_envelope() const { return growth_; }

  // accessors for serialization
  const Matrix& matrix_a() const { return A_; }
  const Matrix& matrix_b() const { return B_; }
  const Vec& bias() const { return b_; }
  const ScalarPath& time_coefficient() const { return coeff_; }
  const Vec& forcing_direction() const { return w_; }
  const ScalarPath& signal() const { return signal_; }
  ScalarMap map() const { return map_; }
  Argument argument() const { return argument_; }
  double amplitude() const { return amplitude_; }

  static const char* map_name(ScalarMap m);
  static ScalarMap map_from_name(const std::string& name);

 private:
  Perturbation() = default;

  Kind kind_ = Kind::zero;
  int dim_ = 0;
  ScalarPath growth_ = ScalarPath::constant(0.0);
  Matrix A_, B_;
  Vec b_;
  ScalarPath coeff_ = ScalarPath::constant(1.0);
  Vec w_;
  ScalarPath signal_ = ScalarPath::constant(0.0);
  ScalarMap map_ = ScalarMap::sin;
  Argument argument_ = Argument::position;
  double amplitude_ = 0.0;
};

/// Perturbation acting on a solver state, with growth envelope beta(t).
///
/// Two forms exist behind one surface:
///  - plain:  g(t, X) = f(t, X, 0), beta = c (native first-order problems);
///  - lifted: the state is (velocity u, position x) and
///            g(t, (u, x)) = (f(t, x, u), -u), beta = c + 1,
///    which rewrites a second-order sweeping problem as a first-order one on
///    the product set K(t) x R^d.
///
/// Product states are measured in the blockwise sum norm |u| + |x|; with it
/// the lifted envelopes beta = c + 1 and gamma = k + 1 transfer exactly.
class StatePerturbation {
 public:
  static StatePerturbation plain(Perturbation f);
  static StatePerturbation lifted(Perturbation f);

  Vec evaluate(double t, const Vec& state) const;
  const ScalarPath& growth() const { return beta_; }
  int state_dim() const { return lifted_ ? 2 * f_.dim() : f_.dim(); }
  int velocity_dim() const { return lifted_ ? f_.dim() : 0; }
  bool is_lifted() const { return lifted_; }
  const Perturbation& source() const { return f_; }

  /// Norm used for growth/bound comparisons: blockwise sum when lifted,
  /// Euclidean otherwise.
  double state_norm(const Vec& state) const;

 private:
  StatePerturbation(Perturbation f, bool lifted);

  Perturbation f_;
  bool lifted_ = false;
  ScalarPath beta_ = ScalarPath::constant(0.0);
};

/// The reduction's lift g(t,(u,x)) = (f(t,x,u), -u) with beta = c + 1.
StatePerturbation lift_perturbation(Perturbation f);

// ---- hypothesis audits -----------------------------------------------------

struct GrowthViolation {
  double t = 0.0;
  Vec x;
  Vec u;
  double f_norm = 0.0;
  double envelope = 0.0;
};

/// Samples (t, x, u) with |x|, |u| <= radius and records every sample where
/// |f| exceeds c(t) (1 + |x| + |u|) beyond roundoff. Deterministic per seed.
std::vector<GrowthViolation> audit_growth(const Perturbation& f,
                                          const TimeGrid& grid, long n_samples,
                                          double radius, std::uint64_t seed);

/// Same audit for a state perturbation against beta(t) (1 + |state|), with
/// the state norm taken from the map (sum norm for lifted maps).
std::vector<GrowthViolation> audit_growth_state(const StatePerturbation& g,
                                                const TimeGrid& grid,
                                                long n_samples, double radius,
                                                std::uint64_t seed);

/// Empirical Lipschitz constant of f over pairs in the closed eta-ball:
/// max |f(t,x,u) - f(t,y,v)| / (|x-y| + |u-v|). A lower estimate of k_eta.
double audit_lipschitz(const Perturbation& f, const TimeGrid& grid, double eta,
                       long n_pairs, std::uint64_t seed);

/// Empirical Lipschitz constant of a state perturbation; lifted maps are
/// measured with blockwise sum norms on both sides.
double audit_lipschitz_state(const StatePerturbation& g, const TimeGrid& grid,
                             double eta, long n_pairs, std::uint64_t seed);

// ---- a-priori bound machinery ----------------------------------------------

class FirstOrderScenario;

/// The solution bounds' constant and envelopes:
///   l = |X0| + exp(2 int beta) int (2 beta(s) (1 + |X0|) + |a'(s)|) ds,
///   envelope_f(t)  = (1 + l) beta(t),
///   envelope_du(t) = (1 + l) beta(t) + |a'(t)|.
struct BoundsReport {
  double l = 0.0;
  ScalarPath beta = ScalarPath::constant(0.0);
  double x0_norm = 0.0;
  double integral_beta = 0.0;
  double integral_rhs = 0.0;

  double envelope_f(double t) const { return (1.0 + l) * beta.value(t); }
};

/// Composite Simpson evaluation of l on the scenario grid refined 4x.
BoundsReport a_priori_bound(const FirstOrderScenario& scenario);

}  // namespace sweep
