#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "sweep/errors.hpp"

namespace sweep {

/// Dense vector in R^d. Public operations admit finite entries only.
using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm_sq(const Vec& a) { return dot(a, a); }

inline double norm(const Vec& a) { return std::sqrt(norm_sq(a)); }

inline Vec add(const Vec& a, const Vec& b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

inline Vec sub(const Vec& a, const Vec& b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

inline Vec scaled(const Vec& a, double s) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * s;
  return out;
}

inline double distance_sq(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline double distance(const Vec& a, const Vec& b) {
  return std::sqrt(distance_sq(a, b));
}

inline Vec concat(const Vec& a, const Vec& b) {
  Vec out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

/// First n entries.
inline Vec head(const Vec& v, std::size_t n) {
  return Vec(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n));
}

/// Last n entries.
inline Vec tail(const Vec& v, std::size_t n) {
  return Vec(v.end() - static_cast<std::ptrdiff_t>(n), v.end());
}

inline bool all_finite(const Vec& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

inline void require_finite(const Vec& v, const std::string& what) {
  if (!all_finite(v))
    throw ValidationError(what + ": entries must be finite (no NaN/Inf)");
}

inline void require_dim(const Vec& v, int dim, const std::string& what) {
  if (static_cast<int>(v.size()) != dim)
    throw ValidationError(what + ": dimension mismatch, expected " +
                          std::to_string(dim) + ", got " +
                          std::to_string(v.size()));
}

}  // namespace sweep
