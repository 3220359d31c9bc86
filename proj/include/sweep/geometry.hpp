#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "sweep/paths.hpp"
#include "sweep/rng.hpp"
#include "sweep/time_grid.hpp"
#include "sweep/vec.hpp"

namespace sweep {

/// Membership tolerance: p is treated as a point of K(t) when
/// distance(t, p) <= kFeasibilityTol.
inline constexpr double kFeasibilityTol = 1e-9;

/// Allowed excess of the variation ratio |d(u,K(t))-d(u,K(s))| / |a(t)-a(s)|
/// over 1 before a modulus counts as violated.
inline constexpr double kVariationTol = 1e-9;

inline constexpr double kInfiniteRadius = std::numeric_limits<double>::infinity();

struct Interval {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
};

struct SetOptions {
  /// Override the canonical prox-regularity radius (used by falsification
  /// audits; the canonical value is always the exact one for the kind).
  std::optional<double> prox_radius;
  /// Override the canonical variation modulus a(t).
  std::optional<ScalarPath> variation_modulus;
  Interval horizon{};
};

/// Time-dependent closed set K(t) in R^d with closed-form metric projection,
/// a certified prox-regularity radius and a certified variation modulus a(t)
/// satisfying |d(u,K(t)) - d(u,K(s))| <= |a(t) - a(s)|.
///
/// Instances are immutable after construction; every operation is pure.
class MovingSet {
 public:
  virtual ~MovingSet() = default;

  int dim() const { return dim_; }
  /// Declared prox radius r: metric projection is single-valued on
  /// {p : d(p, K(t)) < r}. +inf encodes convexity.
  double prox_radius() const { return prox_radius_; }
  /// Exact radius for the kind, independent of any declared override.
  double canonical_prox_radius() const { return canonical_radius_; }
  const Interval& horizon() const { return horizon_; }

  /// Euclidean distance to K(t); 0 exactly when p is a member.
  double distance(double t, const Vec& p) const;

  /// Unique nearest point of K(t). Throws NonUniqueProjection when
  /// d(p, K(t)) >= prox_radius().
  Vec project(double t, const Vec& p) const;

  bool contains(double t, const Vec& p) const {
    return distance(t, p) <= kFeasibilityTol;
  }

  /// Variation modulus a(t) and its derivative magnitude |a'(t)|.
  double variation_value(double t) const;
  double variation_rate(double t) const;

  /// Random member of K(t); the draw is supported on a bounded region around
  /// anchor_point(t) and lands in the interior with probability one for
  /// solid kinds.
  Vec sample_point(double t, Rng& rng) const;

  /// A deterministic member of K(t).
  Vec anchor_point(double t) const;

  /// Halfwidth of the ambient sampling box used by audits.
  double sampling_halfwidth() const { return do_sampling_halfwidth(); }

  /// Radius within which offset points stay safely projectable regardless of
  /// any declared prox_radius override.
  double safe_normal_radius() const { return do_safe_normal_radius(); }

 protected:
  MovingSet(int dim, double canonical_radius, const SetOptions& opts);

  virtual double do_distance(double t, const Vec& p) const = 0;
  virtual Vec do_project(double t, const Vec& p) const = 0;
  virtual double canonical_variation_value(double t) const = 0;
  virtual double canonical_variation_rate(double t) const = 0;
  virtual Vec do_sample(double t, Rng& rng) const = 0;
  virtual Vec do_anchor(double t) const = 0;
  virtual double do_sampling_halfwidth() const { return 4.0; }
  virtual double do_safe_normal_radius() const { return canonical_radius_; }

  void check_time(double t) const;

 private:
  int dim_;
  double canonical_radius_;
  double prox_radius_;
  std::optional<ScalarPath> variation_override_;
  Interval horizon_;
};

using SetPtr = std::shared_ptr<const MovingSet>;

/// Product of a constrained block with an unconstrained R^m block, ordered
/// (block coordinates, free coordinates). Squared distances are additive
/// across blocks and the free block contributes zero, so the product keeps
/// the block's prox radius and variation modulus.
class ProductSet final : public MovingSet {
 public:
  ProductSet(SetPtr block, int free_dims, const SetOptions& opts);

  const MovingSet& block() const { return *block_; }
  SetPtr block_ptr() const { return block_; }
  int free_dims() const { return free_dims_; }

 protected:
  double do_distance(double t, const Vec& p) const override;
  Vec do_project(double t, const Vec& p) const override;
  double canonical_variation_value(double t) const override;
  double canonical_variation_rate(double t) const override;
  Vec do_sample(double t, Rng& rng) const override;
  Vec do_anchor(double t) const override;
  double do_sampling_halfwidth() const override;
  double do_safe_normal_radius() const override;

 private:
  SetPtr block_;
  int free_dims_;
};

// ---- builtin kinds -------------------------------------------------------

/// { p : <e, p> >= c(t) } with e normalized internally (c rescales with it).
SetPtr make_half_space(Vec normal, ScalarPath offset, SetOptions opts = {});

/// Closed ball of fixed radius around a moving center.
SetPtr make_ball(MotionPath center, double radius, SetOptions opts = {});

/// Axis box with per-axis bounds; +-inf entries leave a side unbounded.
SetPtr make_box(Vec lower, Vec upper, SetOptions opts = {});

/// base + m(t), with the base set frozen at its t = 0 snapshot.
SetPtr make_translated(SetPtr base, MotionPath shift, SetOptions opts = {});

/// { p : |p - m(t)| >= R }: the closed complement of an open ball, the
/// canonical R-prox-regular (nonconvex) example.
SetPtr make_ball_complement(MotionPath center, double radius,
                            SetOptions opts = {});

std::shared_ptr<const ProductSet> make_product(SetPtr block, int free_dims,
                                               SetOptions opts = {});

// ---- audits ---------------------------------------------------------------

struct ProxViolation {
  Vec base_point;
  Vec normal;
  Vec test_point;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct ProxAuditReport {
  long samples_checked = 0;
  /// Most-violated margin lhs - rhs over all samples (0 when none checked).
  double worst_slack = 0.0;
  long violation_count = 0;
  std::vector<ProxViolation> violations;  // capped at kMaxStoredViolations
};

inline constexpr int kMaxStoredViolations = 100;

/// Margin lhs - rhs of the prox-regularity inequality
///   <xi/|xi|, x - xbar>  <=  |x - xbar|^2 / (2r)
/// with the convention 1/r = 0 for r = +inf. `unit_normal` must be unit.
double prox_margin(double prox_radius, const Vec& base, const Vec& unit_normal,
                   const Vec& test);

/// Samples proximal normals (via projection of tube points) and set members,
/// recording every positive margin of the prox inequality at the declared
/// radius. Deterministic given the seed.
ProxAuditReport prox_inequality_audit(const MovingSet& set, double t,
                                      long n_samples, std::uint64_t seed);

/// Worst ratio |d(u,K(t)) - d(u,K(s))| / |a(t) - a(s)| over all probes and
/// grid pairs, with 0/0 -> 0. Returns +inf when the distance moves while the
/// modulus does not. A correct modulus yields a value <= 1.
double variation_audit(const MovingSet& set, const TimeGrid& grid,
                       std::span<const Vec> probes);

/// Ambient probe cloud around the set for variation audits.
std::vector<Vec> variation_probes(const MovingSet& set, int count,
                                  std::uint64_t seed);

}  // namespace sweep
