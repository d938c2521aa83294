#pragma once

#include "predprey/env/geometry.hpp"

#include <cstdint>
#include <vector>

namespace predprey::env {

inline constexpr double kPositiveReward = 1.0;
inline constexpr double kNegativeReward = -0.2;
inline constexpr double kCaughtReward = -1.0;

/// Two vertical walls placed symmetrically either side of the arena centre.
std::vector<Rect> default_barrier_layout();

/// Static description of the arena. Lengths are world units, speeds per
/// second, angles in degrees.
struct WorldConfig {
  double arena_side = 10.22;
  std::vector<Rect> barrier_layout = default_barrier_layout();
  int n_prey = 6;
  int n_positive_points = 10;
  int n_negative_points = 10;
  bool predator_present = true;

  double prey_move_speed = 2.0;
  double prey_turn_speed = 300.0;
  double predator_move_speed = 20.0;
  double predator_view_radius = 10.33;
  double predator_view_angle = 80.0;

  double prey_radius = 0.25;
  double predator_radius = 0.4;
  double point_radius = 0.2;

  int ray_count = 11;
  double ray_half_angle = 70.0;
  double ray_length = 10.0;

  double tick_dt = 0.05;
  std::int64_t episode_length = 2000;
  std::uint64_t seed = 0;

  double half_side() const { return arena_side / 2.0; }
  Rect arena() const { return {{-half_side(), -half_side()}, {half_side(), half_side()}}; }

  /// Length of one prey observation vector: 7 values per ray plus 2 ego features.
  int observation_size() const { return ray_count * 7 + 2; }

  /// Throws ConfigError describing the first violated constraint.
  void validate() const;

  friend bool operator==(const WorldConfig&, const WorldConfig&) = default;
};

}  // namespace predprey::env
