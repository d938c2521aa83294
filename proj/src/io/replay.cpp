#include "predprey/io/replay.hpp"

#include "predprey/errors.hpp"
#include "predprey/format.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <vector>

namespace predprey::io {

std::string replay_export(std::span<const env::TrajectoryRow> rows, std::int64_t run_id,
                          std::int64_t first_tick, std::int64_t last_tick) {
  std::map<std::int64_t, std::vector<const env::TrajectoryRow*>> frames;
  for (const auto& r : rows) {
    if (r.run_id == run_id) frames[r.tick].push_back(&r);
  }
  if (frames.empty()) throw InputError("run " + std::to_string(run_id) + " is not in the trajectory log");
  const auto lo = frames.begin()->first;
  const auto hi = frames.rbegin()->first;
  if (first_tick > last_tick || first_tick < lo || last_tick > hi) {
    throw InputError("tick range [" + std::to_string(first_tick) + ", " + std::to_string(last_tick) +
                     "] is outside run " + std::to_string(run_id) + " (ticks " + std::to_string(lo) + ".." +
                     std::to_string(hi) + ")");
  }
  std::ostringstream out;
  for (auto it = frames.lower_bound(first_tick); it != frames.end() && it->first <= last_tick; ++it) {
    out << "frame " << it->first << '\n';
    for (const auto* r : it->second) {
      out << "  " << r->entity_kind << ' ' << r->entity_id << " x=" << format_double(r->x)
          << " y=" << format_double(r->y) << " heading=" << format_double(r->heading) << '\n';
    }
    for (const auto* r : it->second) {
      if (r->event.empty()) continue;
      std::istringstream events(r->event);
      std::string kind;
      while (std::getline(events, kind, ';')) {
        out << "  event " << kind << ' ' << r->entity_kind << '=' << r->entity_id << '\n';
      }
    }
  }
  return out.str();
}

}  // namespace predprey::io
