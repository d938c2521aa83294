#pragma once

#include "predprey/env/world.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace predprey::env {

/// One row of the trajectory CSV: a single entity at a single tick.
struct TrajectoryRow {
  std::int64_t run_id = 0;
  std::int64_t tick = 0;
  std::string entity_kind;  // prey | predator | point_positive | point_negative
  int entity_id = 0;
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  std::string event;  // empty, or event kinds joined by ';'

  friend bool operator==(const TrajectoryRow&, const TrajectoryRow&) = default;
};

inline constexpr const char* kTrajectoryHeader = "run_id,tick,entity_kind,entity_id,x,y,heading,event";

/// Appends one row per entity for the world's current tick. Events from the
/// most recent step are attached to the prey they concern.
void append_frame(const World& world, std::int64_t run_id, std::vector<TrajectoryRow>& rows);

void write_trajectory_header(std::ostream& out);
void write_trajectory_rows(std::ostream& out, const std::vector<TrajectoryRow>& rows);
std::vector<TrajectoryRow> read_trajectory_csv(const std::filesystem::path& path);

}  // namespace predprey::env
