#pragma once

#include "predprey/env/trajectory.hpp"

#include <cstdint>
#include <span>
#include <string>

namespace predprey::io {

/// Plain-text frames for ticks first..last (inclusive) of one run: a
/// "frame <tick>" line, one line per entity, then one line per event.
/// Throws InputError if the run is absent or the range leaves the logged ticks.
std::string replay_export(std::span<const env::TrajectoryRow> rows, std::int64_t run_id,
                          std::int64_t first_tick, std::int64_t last_tick);

}  // namespace predprey::io
