#include "sweep/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sweep {

namespace {

// Relative overshoot applied by the closed-form projections so the returned
// point is feasible in exact floating point: re-projecting it is the
// identity, and node feasibility checks see distance 0.
constexpr double kProjectionMargin = 1e-14;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

MovingSet::MovingSet(int dim, double canonical_radius, const SetOptions& opts)
    : dim_(dim),
      canonical_radius_(canonical_radius),
      prox_radius_(opts.prox_radius.value_or(canonical_radius)),
      variation_override_(opts.variation_modulus),
      horizon_(opts.horizon) {
  if (dim_ < 1) throw ValidationError("set: dimension must be >= 1");
  if (!(prox_radius_ > 0.0))
    throw ValidationError("set: prox_radius must be positive");
  if (!(horizon_.lo <= horizon_.hi))
    throw ValidationError("set: empty horizon");
}

void MovingSet::check_time(double t) const {
  bool ok = std::isfinite(t);
  ok = ok && t >= horizon_.lo - 1e-9 * (1.0 + std::fabs(horizon_.lo));
  if (std::isfinite(horizon_.hi))
    ok = ok && t <= horizon_.hi + 1e-9 * (1.0 + std::fabs(horizon_.hi));
  if (!ok)
    throw ValidationError("time " + fmt(t) + " outside horizon [" +
                          fmt(horizon_.lo) + ", " + fmt(horizon_.hi) + "]");
}

double MovingSet::distance(double t, const Vec& p) const {
  check_time(t);
  require_dim(p, dim_, "point");
  require_finite(p, "point");
  return do_distance(t, p);
}

Vec MovingSet::project(double t, const Vec& p) const {
  check_time(t);
  require_dim(p, dim_, "point");
  require_finite(p, "point");
  const double d = do_distance(t, p);
  if (!(d < prox_radius_))
    throw NonUniqueProjection(
        "projection not unique: distance " + fmt(d) + " >= prox radius " +
            fmt(prox_radius_) + " at t = " + fmt(t),
        t, d, prox_radius_);
  return do_project(t, p);
}

double MovingSet::variation_value(double t) const {
  check_time(t);
  if (variation_override_) return variation_override_->value(t);
  return canonical_variation_value(t);
}

double MovingSet::variation_rate(double t) const {
  check_time(t);
  if (variation_override_) return std::fabs(variation_override_->derivative(t));
  return canonical_variation_rate(t);
}

Vec MovingSet::sample_point(double t, Rng& rng) const {
  check_time(t);
  return do_sample(t, rng);
}

Vec MovingSet::anchor_point(double t) const {
  check_time(t);
  return do_anchor(t);
}

// ---- half-space ------------------------------------------------------------

namespace {

class MovingHalfSpace final : public MovingSet {
 public:
  MovingHalfSpace(Vec normal, ScalarPath offset, const SetOptions& opts)
      : MovingSet(static_cast<int>(normal.size()), kInfiniteRadius, opts),
        normal_(std::move(normal)),
        offset_(offset) {
    require_finite(normal_, "half-space normal");
    const double n = norm(normal_);
    if (!(n > 0.0))
      throw ValidationError("half-space normal must be nonzero");
    for (auto& e : normal_) e /= n;
    offset_scale_ = 1.0 / n;
  }

 protected:
  double do_distance(double t, const Vec& p) const override {
    return std::max(0.0, gap(t, p));
  }

  Vec do_project(double t, const Vec& p) const override {
    double g = gap(t, p);
    if (g <= 0.0) return p;
    g += kProjectionMargin * (1.0 + std::fabs(offset_at(t)) + norm(p));
    Vec q = p;
    for (int i = 0; i < dim(); ++i) q[i] += g * normal_[i];
    return q;
  }

  double canonical_variation_value(double t) const override {
    return offset_.total_variation(t) * offset_scale_;
  }
  double canonical_variation_rate(double t) const override {
    return std::fabs(offset_.derivative(t)) * offset_scale_;
  }

  Vec do_sample(double t, Rng& rng) const override {
    Vec p = add(do_anchor(t), uniform_box(rng, dim(), sampling_halfwidth()));
    const double g = gap(t, p);
    if (g > 0.0)  // reflect infeasible draws across the boundary plane
      for (int i = 0; i < dim(); ++i) p[i] += 2.0 * g * normal_[i];
    return p;
  }

  Vec do_anchor(double t) const override {
    return scaled(normal_, offset_at(t));
  }

 private:
  double offset_at(double t) const { return offset_.value(t) * offset_scale_; }
  double gap(double t, const Vec& p) const {
    return offset_at(t) - dot(normal_, p);
  }

  Vec normal_;  // unit
  ScalarPath offset_;
  double offset_scale_ = 1.0;
};

// ---- ball ------------------------------------------------------------------

class MovingBall final : public MovingSet {
 public:
  MovingBall(MotionPath center, double radius, const SetOptions& opts)
      : MovingSet(center.dim(), kInfiniteRadius, opts),
        center_(std::move(center)),
        radius_(radius) {
    if (!(std::isfinite(radius_) && radius_ > 0.0))
      throw ValidationError("ball radius must be positive");
  }

 protected:
  double do_distance(double t, const Vec& p) const override {
    return std::max(0.0, sweep::distance(p, center_.value(t)) - radius_);
  }

  Vec do_project(double t, const Vec& p) const override {
    const Vec m = center_.value(t);
    const double rho = sweep::distance(p, m);
    if (rho <= radius_) return p;
    const double scale = radius_ * (1.0 - kProjectionMargin) / rho;
    Vec q(p.size());
    for (int i = 0; i < dim(); ++i) q[i] = m[i] + (p[i] - m[i]) * scale;
    return q;
  }

  double canonical_variation_value(double t) const override {
    return center_.arc_length(t);
  }
  double canonical_variation_rate(double t) const override {
    return center_.speed(t);
  }

  Vec do_sample(double t, Rng& rng) const override {
    return add(center_.value(t), random_in_ball(rng, dim(), radius_));
  }

  Vec do_anchor(double t) const override { return center_.value(t); }

  double do_sampling_halfwidth() const override {
    return std::max(4.0, 2.0 * radius_);
  }

 private:
  MotionPath center_;
  double radius_;
};

// ---- box -------------------------------------------------------------------

class Box final : public MovingSet {
 public:
  Box(Vec lower, Vec upper, const SetOptions& opts)
      : MovingSet(static_cast<int>(lower.size()), kInfiniteRadius, opts),
        lower_(std::move(lower)),
        upper_(std::move(upper)) {
    if (lower_.size() != upper_.size())
      throw ValidationError("box: lower/upper dimension mismatch");
    for (std::size_t i = 0; i < lower_.size(); ++i) {
      if (std::isnan(lower_[i]) || std::isnan(upper_[i]))
        throw ValidationError("box: bounds must not be NaN");
      if (!(lower_[i] <= upper_[i]))
        throw ValidationError("box: lower bound exceeds upper bound on axis " +
                              std::to_string(i));
    }
  }

 protected:
  double do_distance(double t, const Vec& p) const override {
    (void)t;
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) {
      const double d = clamp_gap(i, p[i]);
      s += d * d;
    }
    return std::sqrt(s);
  }

  Vec do_project(double t, const Vec& p) const override {
    (void)t;
    Vec q = p;
    for (int i = 0; i < dim(); ++i)
      q[i] = std::min(std::max(q[i], lower_[i]), upper_[i]);
    return q;
  }

  double canonical_variation_value(double) const override { return 0.0; }
  double canonical_variation_rate(double) const override { return 0.0; }

  Vec do_sample(double t, Rng& rng) const override {
    const Vec a = do_anchor(t);
    Vec p(a.size());
    const double L = sampling_halfwidth();
    for (int i = 0; i < dim(); ++i) {
      const double lo = std::max(lower_[i], a[i] - L);
      const double hi = std::min(upper_[i], a[i] + L);
      p[i] = uniform(rng, lo, hi);
    }
    return p;
  }

  Vec do_anchor(double) const override {
    Vec a(lower_.size());
    for (int i = 0; i < dim(); ++i) {
      const bool lo_fin = std::isfinite(lower_[i]);
      const bool hi_fin = std::isfinite(upper_[i]);
      if (lo_fin && hi_fin)
        a[i] = 0.5 * (lower_[i] + upper_[i]);
      else if (lo_fin)
        a[i] = lower_[i] + 1.0;
      else if (hi_fin)
        a[i] = upper_[i] - 1.0;
      else
        a[i] = 0.0;
    }
    return a;
  }

 private:
  double clamp_gap(int i, double x) const {
    if (x < lower_[i]) return lower_[i] - x;
    if (x > upper_[i]) return x - upper_[i];
    return 0.0;
  }

  Vec lower_, upper_;
};

// ---- translated base -------------------------------------------------------

class TranslatedBase final : public MovingSet {
 public:
  TranslatedBase(SetPtr base, MotionPath shift, double canonical_radius,
                 const SetOptions& opts)
      : MovingSet(base->dim(), canonical_radius, opts),
        base_(std::move(base)),
        shift_(std::move(shift)) {
    if (shift_.dim() != dim())
      throw ValidationError("translated_base: translation dimension mismatch");
  }

 protected:
  double do_distance(double t, const Vec& p) const override {
    return base_->distance(0.0, sub(p, shift_.value(t)));
  }

  Vec do_project(double t, const Vec& p) const override {
    const Vec m = shift_.value(t);
    return add(base_->project(0.0, sub(p, m)), m);
  }

  double canonical_variation_value(double t) const override {
    return shift_.arc_length(t);
  }
  double canonical_variation_rate(double t) const override {
    return shift_.speed(t);
  }

  Vec do_sample(double t, Rng& rng) const override {
    return add(base_->sample_point(0.0, rng), shift_.value(t));
  }

  Vec do_anchor(double t) const override {
    return add(base_->anchor_point(0.0), shift_.value(t));
  }

  double do_sampling_halfwidth() const override {
    return base_->sampling_halfwidth();
  }
  double do_safe_normal_radius() const override {
    return base_->safe_normal_radius();
  }

 private:
  SetPtr base_;
  MotionPath shift_;
};

// ---- ball complement -------------------------------------------------------

class BallComplement final : public MovingSet {
 public:
  BallComplement(MotionPath center, double radius, const SetOptions& opts)
      : MovingSet(center.dim(), radius, opts),
        center_(std::move(center)),
        radius_(radius) {
    if (!(std::isfinite(radius_) && radius_ > 0.0))
      throw ValidationError("ball_complement radius must be positive");
  }

 protected:
  double do_distance(double t, const Vec& p) const override {
    return std::max(0.0, radius_ - sweep::distance(p, center_.value(t)));
  }

  Vec do_project(double t, const Vec& p) const override {
    const Vec m = center_.value(t);
    const double rho = sweep::distance(p, m);
    if (rho >= radius_) return p;
    if (rho == 0.0)
      throw NonUniqueProjection(
          "projection not unique: point coincides with the excluded ball's "
          "center at t = " + fmt(t),
          t, radius_, prox_radius());
    const double scale = radius_ * (1.0 + kProjectionMargin) / rho;
    Vec q(p.size());
    for (int i = 0; i < dim(); ++i) q[i] = m[i] + (p[i] - m[i]) * scale;
    return q;
  }

  double canonical_variation_value(double t) const override {
    return center_.arc_length(t);
  }
  double canonical_variation_rate(double t) const override {
    return center_.speed(t);
  }

  Vec do_sample(double t, Rng& rng) const override {
    const Vec m = center_.value(t);
    for (;;) {
      const Vec y = uniform_box(rng, dim(), sampling_halfwidth());
      const double rho = norm(y);
      if (rho >= radius_) return add(m, y);
      if (rho == 0.0) continue;
      // reflect interior draws across the sphere
      return add(m, scaled(y, (2.0 * radius_ - rho) / rho));
    }
  }

  Vec do_anchor(double t) const override {
    Vec a = center_.value(t);
    a[0] += 1.5 * radius_;
    return a;
  }

  double do_sampling_halfwidth() const override {
    return std::max(4.0, 3.0 * radius_);
  }
  double do_safe_normal_radius() const override { return radius_; }

 private:
  MotionPath center_;
  double radius_;
};

}  // namespace

// ---- product ---------------------------------------------------------------

ProductSet::ProductSet(SetPtr block, int free_dims, const SetOptions& opts)
    : MovingSet(block->dim() + free_dims, block->prox_radius(), opts),
      block_(std::move(block)),
      free_dims_(free_dims) {
  if (free_dims_ < 0)
    throw ValidationError("product: free_dims must be >= 0");
}

double ProductSet::do_distance(double t, const Vec& p) const {
  // squared distances add across blocks; the free block contributes zero
  return block_->distance(t, head(p, static_cast<std::size_t>(block_->dim())));
}

Vec ProductSet::do_project(double t, const Vec& p) const {
  const std::size_t bd = static_cast<std::size_t>(block_->dim());
  return concat(block_->project(t, head(p, bd)),
                tail(p, static_cast<std::size_t>(free_dims_)));
}

double ProductSet::canonical_variation_value(double t) const {
  return block_->variation_value(t);
}

double ProductSet::canonical_variation_rate(double t) const {
  return block_->variation_rate(t);
}

Vec ProductSet::do_sample(double t, Rng& rng) const {
  return concat(block_->sample_point(t, rng),
                uniform_box(rng, free_dims_, sampling_halfwidth()));
}

Vec ProductSet::do_anchor(double t) const {
  return concat(block_->anchor_point(t),
                Vec(static_cast<std::size_t>(free_dims_), 0.0));
}

double ProductSet::do_sampling_halfwidth() const {
  return block_->sampling_halfwidth();
}

double ProductSet::do_safe_normal_radius() const {
  return block_->safe_normal_radius();
}

// ---- factories -------------------------------------------------------------

SetPtr make_half_space(Vec normal, ScalarPath offset, SetOptions opts) {
  return std::make_shared<MovingHalfSpace>(std::move(normal), offset, opts);
}

SetPtr make_ball(MotionPath center, double radius, SetOptions opts) {
  return std::make_shared<MovingBall>(std::move(center), radius, opts);
}

SetPtr make_box(Vec lower, Vec upper, SetOptions opts) {
  return std::make_shared<Box>(std::move(lower), std::move(upper), opts);
}

SetPtr make_translated(SetPtr base, MotionPath shift, SetOptions opts) {
  const double canonical = base->prox_radius();
  return std::make_shared<TranslatedBase>(std::move(base), std::move(shift),
                                          canonical, opts);
}

SetPtr make_ball_complement(MotionPath center, double radius, SetOptions opts) {
  return std::make_shared<BallComplement>(std::move(center), radius, opts);
}

std::shared_ptr<const ProductSet> make_product(SetPtr block, int free_dims,
                                               SetOptions opts) {
  return std::make_shared<ProductSet>(std::move(block), free_dims, opts);
}

// ---- audits ----------------------------------------------------------------

double prox_margin(double prox_radius, const Vec& base, const Vec& unit_normal,
                   const Vec& test) {
  const double lhs = dot(unit_normal, sub(test, base));
  const double rhs = std::isinf(prox_radius)
                         ? 0.0
                         : distance_sq(test, base) / (2.0 * prox_radius);
  return lhs - rhs;
}

ProxAuditReport prox_inequality_audit(const MovingSet& set, double t,
                                      long n_samples, std::uint64_t seed) {
  Rng rng(seed);
  ProxAuditReport rep;
  if (n_samples <= 0) return rep;

  const long bases = std::max<long>(
      8, std::lround(std::sqrt(static_cast<double>(n_samples) / 8.0)));
  const long tests_per_base = std::max<long>(1, n_samples / bases);

  const Vec anchor = set.anchor_point(t);
  const double halfwidth = set.sampling_halfwidth();
  const double tube_cap = 0.9 * set.safe_normal_radius();

  double worst = 0.0;
  bool any = false;
  for (long b = 0; b < bases; ++b) {
    // proximal normal at a boundary point, generated by projecting a point
    // of the uniqueness tube back onto the set
    Vec base_point, normal;
    bool found = false;
    for (int attempt = 0; attempt < 256 && !found; ++attempt) {
      const Vec q = add(anchor, uniform_box(rng, set.dim(), 1.2 * halfwidth));
      const double dq = set.distance(t, q);
      if (dq <= 1e-12 || !(dq < tube_cap)) continue;
      base_point = set.project(t, q);
      Vec xi = sub(q, base_point);
      const double n = norm(xi);
      if (n <= 1e-14) continue;
      normal = scaled(xi, 1.0 / n);
      found = true;
    }
    if (!found) continue;

    for (long j = 0; j < tests_per_base; ++j) {
      const Vec x = set.sample_point(t, rng);
      const double margin = prox_margin(set.prox_radius(), base_point, normal, x);
      ++rep.samples_checked;
      if (!any || margin > worst) {
        worst = margin;
        any = true;
      }
      if (margin > 0.0) {
        ++rep.violation_count;
        if (static_cast<int>(rep.violations.size()) < kMaxStoredViolations) {
          const double lhs = dot(normal, sub(x, base_point));
          rep.violations.push_back({base_point, normal, x, lhs, lhs - margin});
        }
      }
    }
  }
  rep.worst_slack = any ? worst : 0.0;
  return rep;
}

double variation_audit(const MovingSet& set, const TimeGrid& grid,
                       std::span<const Vec> probes) {
  const int n = grid.steps();
  std::vector<double> a(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) a[static_cast<std::size_t>(i)] = set.variation_value(grid.node(i));

  double worst = 0.0;
  std::vector<double> d(static_cast<std::size_t>(n) + 1);
  for (const Vec& probe : probes) {
    for (int i = 0; i <= n; ++i)
      d[static_cast<std::size_t>(i)] = set.distance(grid.node(i), probe);
    for (int i = 0; i <= n; ++i) {
      for (int j = i + 1; j <= n; ++j) {
        const double dd = std::fabs(d[static_cast<std::size_t>(j)] - d[static_cast<std::size_t>(i)]);
        if (dd == 0.0) continue;  // covers the 0/0 convention
        const double da = std::fabs(a[static_cast<std::size_t>(j)] - a[static_cast<std::size_t>(i)]);
        const double ratio = dd / da;  // +inf when the modulus is flat
        if (ratio > worst) worst = ratio;
      }
    }
  }
  return worst;
}

std::vector<Vec> variation_probes(const MovingSet& set, int count,
                                  std::uint64_t seed) {
  Rng rng(seed);
  const Vec anchor = set.anchor_point(set.horizon().lo);
  const double L = set.sampling_halfwidth();
  std::vector<Vec> probes;
  probes.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    probes.push_back(add(anchor, uniform_box(rng, set.dim(), 1.5 * L)));
  return probes;
}

}  // namespace sweep
