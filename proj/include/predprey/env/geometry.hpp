#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace predprey::env {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// Axis-aligned rectangle, min corner inclusive.
struct Rect {
  Vec2 min;
  Vec2 max;

  bool contains(Vec2 p) const { return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y; }
  bool strictly_contains(Vec2 p) const {
    return p.x > min.x && p.x < max.x && p.y > min.y && p.y < max.y;
  }

  friend bool operator==(const Rect&, const Rect&) = default;
};

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Maps any angle in degrees onto [0, 360).
inline double normalize_heading(double deg) {
  double h = std::fmod(deg, 360.0);
  if (h < 0.0) h += 360.0;
  if (h >= 360.0) h -= 360.0;
  return h;
}

/// Unit vector for a heading in degrees, 0 = +x, counter-clockwise positive.
inline Vec2 heading_vector(double deg) {
  const double r = deg_to_rad(deg);
  return {std::cos(r), std::sin(r)};
}

inline bool circle_overlaps_rect(Vec2 c, double radius, const Rect& r) {
  const double qx = std::clamp(c.x, r.min.x, r.max.x);
  const double qy = std::clamp(c.y, r.min.y, r.max.y);
  const double dx = c.x - qx;
  const double dy = c.y - qy;
  return dx * dx + dy * dy < radius * radius;
}

/// Slab test: does the closed segment a-b touch the rectangle's interior or boundary?
bool segment_intersects_rect(Vec2 a, Vec2 b, const Rect& r);

/// Distance along a unit-direction ray to the first point of the rectangle,
/// or nullopt if missed. Returns 0 when the origin lies inside.
std::optional<double> ray_rect_distance(Vec2 origin, Vec2 dir, const Rect& r);

/// Distance along a unit-direction ray to the first point of a circle,
/// or nullopt if missed. Returns 0 when the origin lies inside.
std::optional<double> ray_circle_distance(Vec2 origin, Vec2 dir, Vec2 center, double radius);

/// Distance from an interior origin to the boundary of the rectangle along a
/// unit-direction ray.
double ray_exit_distance(Vec2 origin, Vec2 dir, const Rect& r);

}  // namespace predprey::env
