#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>

namespace yieldnet {

/// Relative tolerance used before every floor, fractional part, and sign test.
inline constexpr double kSnapTolerance = 1e-9;

/// Returns x rounded to the nearest integer if it lies within the relative
/// snap tolerance of it, otherwise x unchanged.
inline double snap(double x) {
  const double r = std::nearbyint(x);
  if (std::abs(x - r) <= kSnapTolerance * std::max(1.0, std::abs(x))) return r;
  return x;
}

inline long long floor_snap(double x) { return static_cast<long long>(std::floor(snap(x))); }

/// Fractional part {x} = x - floor(x), exactly 0 at snapped integers.
inline double frac_snap(double x) {
  const double s = snap(x);
  return s - std::floor(s);
}

/// Largest magnitude among the terms of an expression; the scale for sign tests.
inline double magnitude(std::initializer_list<double> terms) {
  double m = 1.0;
  for (double t : terms) m = std::max(m, std::abs(t));
  return m;
}

inline bool near_zero(double x, double scale) { return std::abs(x) <= kSnapTolerance * scale; }
inline bool definitely_negative(double x, double scale) { return x < -kSnapTolerance * scale; }
inline bool definitely_positive(double x, double scale) { return x > kSnapTolerance * scale; }

inline bool approx_equal(double a, double b, double rel = kSnapTolerance) {
  return std::abs(a - b) <= rel * magnitude({a, b});
}

}  // namespace yieldnet
