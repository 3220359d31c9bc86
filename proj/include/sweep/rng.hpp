#pragma once

#include <cstdint>
#include <random>

#include "sweep/vec.hpp"

namespace sweep {

using Rng = std::mt19937_64;

/// Default seed for all audit sampling; the CLI overrides it via SWEEP_SEED.
inline constexpr std::uint64_t kDefaultSeed = 1234567;

/// Uniform draw in [0, 1), portable across standard library implementations.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

inline Vec uniform_box(Rng& rng, int dim, double halfwidth) {
  Vec out(static_cast<std::size_t>(dim));
  for (auto& x : out) x = uniform(rng, -halfwidth, halfwidth);
  return out;
}

/// Standard Gaussian vector via Box-Muller (deterministic given the stream).
inline Vec gaussian_vec(Rng& rng, int dim) {
  Vec out(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; i += 2) {
    double u1 = uniform01(rng);
    double u2 = uniform01(rng);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    out[static_cast<std::size_t>(i)] = r * std::cos(6.283185307179586476925287 * u2);
    if (i + 1 < dim)
      out[static_cast<std::size_t>(i) + 1] =
          r * std::sin(6.283185307179586476925287 * u2);
  }
  return out;
}

inline Vec random_unit(Rng& rng, int dim) {
  for (;;) {
    Vec g = gaussian_vec(rng, dim);
    const double n = norm(g);
    if (n > 1e-12) return scaled(g, 1.0 / n);
  }
}

/// Uniform draw in the closed ball of the given radius.
inline Vec random_in_ball(Rng& rng, int dim, double radius) {
  Vec dir = random_unit(rng, dim);
  const double r = radius * std::pow(uniform01(rng), 1.0 / dim);
  return scaled(dir, r);
}

}  // namespace sweep
