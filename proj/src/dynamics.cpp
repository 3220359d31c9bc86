#include "sweep/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "sweep/quadrature.hpp"
#include "sweep/solver.hpp"

namespace sweep {

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

Vec Matrix::apply(const Vec& v) const {
  Vec out(static_cast<std::size_t>(rows), 0.0);
  for (int i = 0; i < rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < cols; ++j) s += at(i, j) * v[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = s;
  }
  return out;
}

double Matrix::frobenius() const {
  double s = 0.0;
  for (double x : data) s += x * x;
  return std::sqrt(s);
}

const char* Perturbation::map_name(ScalarMap m) {
  switch (m) {
    case ScalarMap::sin: return "sin";
    case ScalarMap::cos: return "cos";
    case ScalarMap::tanh: return "tanh";
    case ScalarMap::square: return "square";
  }
  return "sin";
}

Perturbation::ScalarMap Perturbation::map_from_name(const std::string& name) {
  if (name == "sin") return ScalarMap::sin;
  if (name == "cos") return ScalarMap::cos;
  if (name == "tanh") return ScalarMap::tanh;
  if (name == "square") return ScalarMap::square;
  throw ValidationError("perturbation.map: unknown scalar map '" + name + "'");
}

Perturbation Perturbation::zero(int dim) {
  if (dim < 1) throw ValidationError("perturbation: dimension must be >= 1");
  Perturbation p;
  p.kind_ = Kind::zero;
  p.dim_ = dim;
  p.growth_ = ScalarPath::constant(0.0);
  return p;
}

Perturbation Perturbation::affine(Matrix A, Matrix B, Vec b,
                                  ScalarPath time_coefficient,
                                  std::optional<ScalarPath> growth) {
  int dim = 0;
  if (!A.empty()) dim = A.rows;
  if (!B.empty()) dim = std::max(dim, B.rows);
  if (!b.empty()) dim = std::max(dim, static_cast<int>(b.size()));
  if (dim == 0)
    throw ValidationError("affine perturbation: A, B, b are all empty");
  if (!A.empty() && (A.rows != dim || A.cols != dim))
    throw ValidationError("affine perturbation: A must be d x d");
  if (!B.empty() && (B.rows != dim || B.cols != dim))
    throw ValidationError("affine perturbation: B must be d x d");
  if (!b.empty() && static_cast<int>(b.size()) != dim)
    throw ValidationError("affine perturbation: b has wrong dimension");

  Perturbation p;
  p.kind_ = Kind::affine;
  p.dim_ = dim;
  p.A_ = std::move(A);
  p.B_ = std::move(B);
  p.b_ = std::move(b);
  p.coeff_ = time_coefficient;
  if (growth) {
    p.growth_ = *growth;
  } else {
    // |coeff (Ax + Bu + b)| <= sup|coeff| max(|A|_F, |B|_F, |b|) (1+|x|+|u|)
    double c0 = std::max({p.A_.frobenius(), p.B_.frobenius(), norm(p.b_)});
    double coeff_sup;
    try {
      coeff_sup = time_coefficient.global_abs_bound();
    } catch (const ValidationError&) {
      throw ValidationError(
          "affine perturbation: growth_envelope required when the "
          "time_coefficient is unbounded");
    }
    p.growth_ = ScalarPath::constant(c0 * coeff_sup);
  }
  return p;
}

Perturbation Perturbation::trigonometric_forcing(Vec w, ScalarPath signal,
                                                 std::optional<ScalarPath> growth) {
  if (w.empty())
    throw ValidationError("trigonometric_forcing: w must be nonempty");
  require_finite(w, "trigonometric_forcing w");
  Perturbation p;
  p.kind_ = Kind::trigonometric_forcing;
  p.dim_ = static_cast<int>(w.size());
  p.w_ = std::move(w);
  p.signal_ = signal;
  if (growth) {
    p.growth_ = *growth;
  } else {
    double sup;
    try {
      sup = signal.global_abs_bound();
    } catch (const ValidationError&) {
      throw ValidationError(
          "trigonometric_forcing: growth_envelope required when the signal "
          "is unbounded");
    }
    p.growth_ = ScalarPath::constant(norm(p.w_) * sup);
  }
  return p;
}

Perturbation Perturbation::componentwise(ScalarMap map, Argument argument,
                                         double amplitude, int dim,
                                         std::optional<ScalarPath> growth) {
  if (dim < 1) throw ValidationError("perturbation: dimension must be >= 1");
  Perturbation p;
  p.kind_ = Kind::componentwise_nonlinear;
  p.dim_ = dim;
  p.map_ = map;
  p.argument_ = argument;
  p.amplitude_ = amplitude;
  if (growth) {
    p.growth_ = *growth;
  } else {
    if (map == ScalarMap::square)
      throw ValidationError(
          "componentwise_nonlinear: growth_envelope required for map "
          "'square'");
    p.growth_ = ScalarPath::constant(std::fabs(amplitude) * std::sqrt(dim));
  }
  return p;
}

Vec Perturbation::evaluate(double t, const Vec& x, const Vec& u) const {
  require_dim(x, dim_, "perturbation position argument");
  require_dim(u, dim_, "perturbation velocity argument");
  require_finite(x, "perturbation position argument");
  require_finite(u, "perturbation velocity argument");

  switch (kind_) {
    case Kind::zero:
      return Vec(static_cast<std::size_t>(dim_), 0.0);
    case Kind::affine: {
      Vec out(static_cast<std::size_t>(dim_), 0.0);
      if (!A_.empty()) out = A_.apply(x);
      if (!B_.empty()) {
        const Vec bu = B_.apply(u);
        for (int i = 0; i < dim_; ++i) out[static_cast<std::size_t>(i)] += bu[static_cast<std::size_t>(i)];
      }
      for (std::size_t i = 0; i < b_.size(); ++i) out[i] += b_[i];
      const double c = coeff_.value(t);
      for (auto& v : out) v *= c;
      return out;
    }
    case Kind::trigonometric_forcing:
      return scaled(w_, signal_.value(t));
    case Kind::componentwise_nonlinear: {
      const Vec& arg = argument_ == Argument::position ? x : u;
      Vec out(static_cast<std::size_t>(dim_));
      for (int i = 0; i < dim_; ++i) {
        const double v = arg[static_cast<std::size_t>(i)];
        double y = 0.0;
        switch (map_) {
          case ScalarMap::sin: y = std::sin(v); break;
          case ScalarMap::cos: y = std::cos(v); break;
          case ScalarMap::tanh: y = std::tanh(v); break;
          case ScalarMap::square: y = v * v; break;
        }
        out[static_cast<std::size_t>(i)] = amplitude_ * y;
      }
      return out;
    }
  }
  return Vec(static_cast<std::size_t>(dim_), 0.0);
}

StatePerturbation::StatePerturbation(Perturbation f, bool lifted)
    : f_(std::move(f)), lifted_(lifted) {
  beta_ = lifted_ ? f_.growth_envelope().shifted(1.0) : f_.growth_envelope();
}

StatePerturbation StatePerturbation::plain(Perturbation f) {
  return StatePerturbation(std::move(f), false);
}

StatePerturbation StatePerturbation::lifted(Perturbation f) {
  return StatePerturbation(std::move(f), true);
}

Vec StatePerturbation::evaluate(double t, const Vec& state) const {
  if (!lifted_) {
    require_dim(state, f_.dim(), "state");
    return f_.evaluate(t, state, Vec(state.size(), 0.0));
  }
  const int d = f_.dim();
  require_dim(state, 2 * d, "state");
  const Vec u = head(state, static_cast<std::size_t>(d));
  const Vec x = tail(state, static_cast<std::size_t>(d));
  const Vec top = f_.evaluate(t, x, u);
  Vec out(static_cast<std::size_t>(2 * d));
  for (int i = 0; i < d; ++i) {
    out[static_cast<std::size_t>(i)] = top[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(d + i)] = -u[static_cast<std::size_t>(i)];
  }
  return out;
}

double StatePerturbation::state_norm(const Vec& state) const {
  if (!lifted_) return norm(state);
  const std::size_t d = static_cast<std::size_t>(f_.dim());
  return norm(head(state, d)) + norm(tail(state, d));
}

StatePerturbation lift_perturbation(Perturbation f) {
  return StatePerturbation::lifted(std::move(f));
}

// ---- audits ----------------------------------------------------------------

std::vector<GrowthViolation> audit_growth(const Perturbation& f,
                                          const TimeGrid& grid, long n_samples,
                                          double radius, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<GrowthViolation> out;
  for (long k = 0; k < n_samples; ++k) {
    const double t = uniform(rng, 0.0, grid.horizon());
    const Vec x = random_in_ball(rng, f.dim(), radius);
    const Vec u = random_in_ball(rng, f.dim(), radius);
    const double fn = norm(f.evaluate(t, x, u));
    const double env =
        f.growth_envelope().value(t) * (1.0 + norm(x) + norm(u));
    if (fn > env * (1.0 + 1e-12)) out.push_back({t, x, u, fn, env});
  }
  return out;
}

std::vector<GrowthViolation> audit_growth_state(const StatePerturbation& g,
                                                const TimeGrid& grid,
                                                long n_samples, double radius,
                                                std::uint64_t seed) {
  Rng rng(seed);
  std::vector<GrowthViolation> out;
  for (long k = 0; k < n_samples; ++k) {
    const double t = uniform(rng, 0.0, grid.horizon());
    Vec state;
    if (g.is_lifted())
      state = concat(random_in_ball(rng, g.velocity_dim(), radius),
                     random_in_ball(rng, g.velocity_dim(), radius));
    else
      state = random_in_ball(rng, g.state_dim(), radius);
    const Vec gv = g.evaluate(t, state);
    double gn;
    if (g.is_lifted()) {
      const std::size_t d = static_cast<std::size_t>(g.velocity_dim());
      gn = norm(head(gv, d)) + norm(tail(gv, d));
    } else {
      gn = norm(gv);
    }
    const double env = g.growth().value(t) * (1.0 + g.state_norm(state));
    if (gn > env * (1.0 + 1e-12)) out.push_back({t, state, {}, gn, env});
  }
  return out;
}

double audit_lipschitz(const Perturbation& f, const TimeGrid& grid, double eta,
                       long n_pairs, std::uint64_t seed) {
  if (!(eta > 0.0)) throw ValidationError("audit_lipschitz: eta must be > 0");
  Rng rng(seed);
  double best = 0.0;
  for (long k = 0; k < n_pairs; ++k) {
    const double t = uniform(rng, 0.0, grid.horizon());
    Vec x = random_in_ball(rng, f.dim(), eta);
    Vec y = random_in_ball(rng, f.dim(), eta);
    Vec u = random_in_ball(rng, f.dim(), eta);
    Vec v = random_in_ball(rng, f.dim(), eta);
    switch (k % 4) {
      case 1:  // position-only pair
        v = u;
        break;
      case 2:  // velocity-only pair
        y = x;
        break;
      case 3: {  // short pair, probes the local slope
        const double s = eta * 1e-3;
        x = random_in_ball(rng, f.dim(), eta * 0.9);
        u = random_in_ball(rng, f.dim(), eta * 0.9);
        y = add(x, random_in_ball(rng, f.dim(), s));
        v = add(u, random_in_ball(rng, f.dim(), s));
        break;
      }
      default:
        break;
    }
    const double den = distance(x, y) + distance(u, v);
    if (den < 1e-300) continue;
    const double num = norm(sub(f.evaluate(t, x, u), f.evaluate(t, y, v)));
    best = std::max(best, num / den);
  }
  return best;
}

double audit_lipschitz_state(const StatePerturbation& g, const TimeGrid& grid,
                             double eta, long n_pairs, std::uint64_t seed) {
  if (!(eta > 0.0)) throw ValidationError("audit_lipschitz: eta must be > 0");
  Rng rng(seed);
  double best = 0.0;
  const int d = g.is_lifted() ? g.velocity_dim() : g.state_dim();
  for (long k = 0; k < n_pairs; ++k) {
    const double t = uniform(rng, 0.0, grid.horizon());
    Vec su, sv;
    double den;
    if (g.is_lifted()) {
      Vec ua = random_in_ball(rng, d, eta), xa = random_in_ball(rng, d, eta);
      Vec ub = random_in_ball(rng, d, eta), xb = random_in_ball(rng, d, eta);
      if (k % 3 == 1) ub = ua;
      if (k % 3 == 2) xb = xa;
      su = concat(ua, xa);
      sv = concat(ub, xb);
      den = distance(ua, ub) + distance(xa, xb);
    } else {
      su = random_in_ball(rng, d, eta);
      sv = random_in_ball(rng, d, eta);
      den = distance(su, sv);
    }
    if (den < 1e-300) continue;
    const Vec ga = g.evaluate(t, su);
    const Vec gb = g.evaluate(t, sv);
    double num;
    if (g.is_lifted()) {
      const std::size_t dd = static_cast<std::size_t>(d);
      const Vec diff = sub(ga, gb);
      num = norm(head(diff, dd)) + norm(tail(diff, dd));
    } else {
      num = norm(sub(ga, gb));
    }
    best = std::max(best, num / den);
  }
  return best;
}

BoundsReport a_priori_bound(const FirstOrderScenario& sc) {
  const TimeGrid& grid = sc.grid();
  const ScalarPath beta = sc.map().growth();
  const double x0n = sc.map().state_norm(sc.initial_state());
  const int intervals = 4 * grid.steps();

  BoundsReport rep;
  rep.beta = beta;
  rep.x0_norm = x0n;
  rep.integral_beta = composite_simpson(
      [&](double s) { return beta.value(s); }, 0.0, grid.horizon(), intervals);
  rep.integral_rhs = composite_simpson(
      [&](double s) {
        return 2.0 * beta.value(s) * (1.0 + x0n) + sc.set().variation_rate(s);
      },
      0.0, grid.horizon(), intervals);
  rep.l = x0n + std::exp(2.0 * rep.integral_beta) * rep.integral_rhs;
  return rep;
}

}  // namespace sweep
