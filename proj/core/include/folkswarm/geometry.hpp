#pragma once

#include <algorithm>
#include <cmath>

namespace folkswarm {

/// A point or displacement on the simulation plane. x is the formal-context
/// coordinate, y the time-exposition coordinate.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return a * s; }
  friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

/// Direction used whenever a separation vector is exactly zero.
inline constexpr Vec2 kFallbackDirection{1.0, 0.0};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

/// Unit vector along v, or kFallbackDirection when v is the zero vector.
inline Vec2 normalized_or_fallback(Vec2 v) {
  const double n = norm(v);
  if (n == 0.0) return kFallbackDirection;
  return v / n;
}

inline Vec2 clamp_to_unit_square(Vec2 p) {
  return {std::clamp(p.x, 0.0, 1.0), std::clamp(p.y, 0.0, 1.0)};
}

}  // namespace folkswarm
