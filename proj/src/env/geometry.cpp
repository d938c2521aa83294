#include "predprey/env/geometry.hpp"

#include <algorithm>
#include <limits>

namespace predprey::env {

namespace {

// Parametric slab clip of origin + t*dir against r for t in [t_lo, t_hi].
bool clip_to_rect(Vec2 origin, Vec2 dir, const Rect& r, double& t_lo, double& t_hi) {
  const double o[2] = {origin.x, origin.y};
  const double d[2] = {dir.x, dir.y};
  const double lo[2] = {r.min.x, r.min.y};
  const double hi[2] = {r.max.x, r.max.y};
  for (int axis = 0; axis < 2; ++axis) {
    if (d[axis] == 0.0) {
      if (o[axis] < lo[axis] || o[axis] > hi[axis]) return false;
      continue;
    }
    double t0 = (lo[axis] - o[axis]) / d[axis];
    double t1 = (hi[axis] - o[axis]) / d[axis];
    if (t0 > t1) std::swap(t0, t1);
    t_lo = std::max(t_lo, t0);
    t_hi = std::min(t_hi, t1);
    if (t_lo > t_hi) return false;
  }
  return true;
}

}  // namespace

bool segment_intersects_rect(Vec2 a, Vec2 b, const Rect& r) {
  double t_lo = 0.0;
  double t_hi = 1.0;
  return clip_to_rect(a, b - a, r, t_lo, t_hi);
}

std::optional<double> ray_rect_distance(Vec2 origin, Vec2 dir, const Rect& r) {
  double t_lo = 0.0;
  double t_hi = std::numeric_limits<double>::infinity();
  if (!clip_to_rect(origin, dir, r, t_lo, t_hi)) return std::nullopt;
  return t_lo;
}

std::optional<double> ray_circle_distance(Vec2 origin, Vec2 dir, Vec2 center, double radius) {
  const Vec2 oc = origin - center;
  const double c = oc.dot(oc) - radius * radius;
  if (c <= 0.0) return 0.0;
  const double b = oc.dot(dir);
  if (b >= 0.0) return std::nullopt;  // pointing away
  const double disc = b * b - c;
  if (disc < 0.0) return std::nullopt;
  return -b - std::sqrt(disc);
}

double ray_exit_distance(Vec2 origin, Vec2 dir, const Rect& r) {
  double t = std::numeric_limits<double>::infinity();
  if (dir.x > 0.0) t = std::min(t, (r.max.x - origin.x) / dir.x);
  if (dir.x < 0.0) t = std::min(t, (r.min.x - origin.x) / dir.x);
  if (dir.y > 0.0) t = std::min(t, (r.max.y - origin.y) / dir.y);
  if (dir.y < 0.0) t = std::min(t, (r.min.y - origin.y) / dir.y);
  return std::max(t, 0.0);
}

}  // namespace predprey::env
