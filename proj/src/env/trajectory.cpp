#include "predprey/env/trajectory.hpp"

#include "predprey/errors.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace predprey::env {

void append_frame(const World& world, std::int64_t run_id, std::vector<TrajectoryRow>& rows) {
  const WorldState& s = world.state();
  for (const AgentBody& b : s.prey) {
    TrajectoryRow row{run_id, s.tick, "prey", b.id, b.position.x, b.position.y, b.heading, {}};
    for (const Event& e : s.event_log) {
      if (e.prey_id != b.id) continue;
      if (!row.event.empty()) row.event += ';';
      row.event += to_string(e.kind);
    }
    rows.push_back(std::move(row));
  }
  if (s.predator) {
    const AgentBody& p = s.predator->body;
    rows.push_back({run_id, s.tick, "predator", 0, p.position.x, p.position.y, p.heading, {}});
  }
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    const PointObject& pt = s.points[i];
    rows.push_back({run_id, s.tick,
                    pt.polarity == Polarity::Positive ? "point_positive" : "point_negative",
                    static_cast<int>(i), pt.position.x, pt.position.y, 0.0, {}});
  }
}

void write_trajectory_header(std::ostream& out) { out << kTrajectoryHeader << '\n'; }

void write_trajectory_rows(std::ostream& out, const std::vector<TrajectoryRow>& rows) {
  char buf[64];
  auto num = [&](double v) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 10);
    out.write(buf, end - buf);
  };
  for (const auto& r : rows) {
    out << r.run_id << ',' << r.tick << ',' << r.entity_kind << ',' << r.entity_id << ',';
    num(r.x);
    out << ',';
    num(r.y);
    out << ',';
    num(r.heading);
    out << ',' << r.event << '\n';
  }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::vector<TrajectoryRow> read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trajectory log " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kTrajectoryHeader) {
    throw IoError("trajectory log " + path.string() + " has an unexpected header");
  }
  std::vector<TrajectoryRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cells = split_csv(line);
    if (cells.size() != 8) {
      throw IoError("trajectory log line " + std::to_string(lineno) + ": expected 8 fields");
    }
    try {
      TrajectoryRow r;
      r.run_id = std::stoll(cells[0]);
      r.tick = std::stoll(cells[1]);
      r.entity_kind = cells[2];
      r.entity_id = std::stoi(cells[3]);
      r.x = std::stod(cells[4]);
      r.y = std::stod(cells[5]);
      r.heading = std::stod(cells[6]);
      r.event = cells[7];
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw IoError("trajectory log line " + std::to_string(lineno) + ": unparsable value");
    }
  }
  return rows;
}

}  // namespace predprey::env
