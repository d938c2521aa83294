#include "predprey/env/world.hpp"

#include "predprey/errors.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <string>

namespace predprey::env {

std::vector<Rect> default_barrier_layout() {
  return {Rect{{-2.7, -2.0}, {-2.3, 2.0}}, Rect{{2.3, -2.0}, {2.7, 2.0}}};
}

void WorldConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("world config: ") + what);
  };
  require(arena_side > 0.0, "arena_side must be positive");
  require(n_prey > 0, "n_prey must be positive");
  require(n_positive_points > 0 && n_negative_points > 0, "point counts must be positive");
  require(prey_move_speed > 0.0 && prey_turn_speed > 0.0 && predator_move_speed > 0.0,
          "speeds must be positive");
  require(predator_view_radius > 0.0, "predator_view_radius must be positive");
  require(predator_view_angle > 0.0 && predator_view_angle <= 360.0,
          "predator_view_angle must lie in (0, 360]");
  require(prey_radius > 0.0 && predator_radius > 0.0 && point_radius > 0.0,
          "contact radii must be positive");
  require(ray_count > 0 && ray_length > 0.0 && ray_half_angle >= 0.0 && ray_half_angle <= 180.0,
          "ray sensor settings out of range");
  require(tick_dt > 0.0 && episode_length > 0, "tick_dt and episode_length must be positive");
  const Rect box = arena();
  for (const Rect& b : barrier_layout) {
    require(b.min.x < b.max.x && b.min.y < b.max.y, "barrier rectangles must have positive area");
    require(box.strictly_contains(b.min) && box.strictly_contains(b.max),
            "barriers must lie strictly inside the arena");
  }
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::PositiveCollected: return "positive_collected";
    case EventKind::NegativeCollected: return "negative_collected";
    case EventKind::PreyCaught: return "prey_caught";
  }
  return "unknown";
}

double event_reward(EventKind kind) {
  switch (kind) {
    case EventKind::PositiveCollected: return kPositiveReward;
    case EventKind::NegativeCollected: return kNegativeReward;
    case EventKind::PreyCaught: return kCaughtReward;
  }
  return 0.0;
}

std::vector<double> RayObservation::to_vector() const {
  std::vector<double> out;
  out.reserve(rays.size() * (kHitKinds + 1) + 2);
  for (const RayHit& hit : rays) {
    for (int k = 0; k < kHitKinds; ++k) out.push_back(static_cast<int>(hit.kind) == k ? 1.0 : 0.0);
    out.push_back(hit.normalized_distance);
  }
  out.push_back(ego.x);
  out.push_back(ego.y);
  return out;
}

World::World(WorldConfig config, std::uint64_t seed) : config_(std::move(config)) {
  config_.validate();
  config_.seed = seed;
  state_.rng.seed(seed);
  place_all();
}

void World::reset_episode() { place_all(); }

bool World::blocked(Vec2 p, double radius) const {
  const double lim = config_.half_side() - radius;
  if (p.x < -lim || p.x > lim || p.y < -lim || p.y > lim) return true;
  return std::any_of(config_.barrier_layout.begin(), config_.barrier_layout.end(),
                     [&](const Rect& b) { return circle_overlaps_rect(p, radius, b); });
}

bool World::position_free(Vec2 p, double radius, std::optional<int> skip_prey,
                          std::optional<std::size_t> skip_point, bool skip_predator) const {
  if (blocked(p, radius)) return false;
  auto clear = [&](Vec2 q, double r) { return (p - q).norm() >= radius + r; };
  for (const auto& b : state_.prey) {
    if (skip_prey && *skip_prey == b.id) continue;
    if (!clear(b.position, config_.prey_radius)) return false;
  }
  for (std::size_t i = 0; i < state_.points.size(); ++i) {
    if (skip_point && *skip_point == i) continue;
    if (!clear(state_.points[i].position, state_.points[i].radius)) return false;
  }
  if (state_.predator && !skip_predator &&
      !clear(state_.predator->body.position, config_.predator_radius)) {
    return false;
  }
  return true;
}

Vec2 World::free_position(double radius, std::optional<int> skip_prey,
                          std::optional<std::size_t> skip_point) {
  const double lim = config_.half_side() - radius;
  if (lim <= 0.0) throw ConfigError("arena too small for entity radius");
  std::uniform_real_distribution<double> coord(-lim, lim);
  for (int attempt = 0; attempt < 10'000; ++attempt) {
    Vec2 p{coord(state_.rng), coord(state_.rng)};
    if (position_free(p, radius, skip_prey, skip_point, false)) return p;
  }
  throw ConfigError("arena too small to place all entities without overlap");
}

Vec2 World::random_waypoint() {
  const double lim = config_.half_side() - config_.predator_radius;
  std::uniform_real_distribution<double> coord(-lim, lim);
  for (int attempt = 0; attempt < 10'000; ++attempt) {
    Vec2 p{coord(state_.rng), coord(state_.rng)};
    if (!blocked(p, config_.predator_radius)) return p;
  }
  throw ConfigError("no reachable patrol waypoint in arena");
}

void World::place_all() {
  std::uniform_real_distribution<double> angle(0.0, 360.0);
  state_.tick = 0;
  state_.event_log.clear();
  state_.prey.clear();
  state_.points.clear();
  state_.predator.reset();
  for (int i = 0; i < config_.n_prey; ++i) {
    AgentBody b;
    b.id = i;
    b.position = free_position(config_.prey_radius, std::nullopt, std::nullopt);
    b.heading = normalize_heading(angle(state_.rng));
    state_.prey.push_back(b);
  }
  if (config_.predator_present) {
    PredatorState p;
    p.body.id = 0;
    p.body.position = free_position(config_.predator_radius, std::nullopt, std::nullopt);
    p.body.heading = normalize_heading(angle(state_.rng));
    state_.predator = p;
    state_.predator->patrol_waypoint = random_waypoint();
  }
  auto add_points = [&](int n, Polarity pol) {
    for (int i = 0; i < n; ++i) {
      PointObject pt;
      pt.polarity = pol;
      pt.radius = config_.point_radius;
      pt.position = free_position(pt.radius, std::nullopt, std::nullopt);
      state_.points.push_back(pt);
    }
  };
  add_points(config_.n_positive_points, Polarity::Positive);
  add_points(config_.n_negative_points, Polarity::Negative);
}

Vec2 World::slide(Vec2 from, Vec2 delta, double radius) const {
  const double lim = config_.half_side() - radius;
  Vec2 p = from;
  Vec2 q{std::clamp(p.x + delta.x, -lim, lim), p.y};
  if (!blocked(q, radius)) p = q;
  q = {p.x, std::clamp(p.y + delta.y, -lim, lim)};
  if (!blocked(q, radius)) p = q;
  return p;
}

StepResult World::step(std::span<const int> prey_actions) {
  if (prey_actions.size() != state_.prey.size()) {
    throw InputError("step: expected " + std::to_string(state_.prey.size()) + " actions, got " +
                     std::to_string(prey_actions.size()));
  }
  for (std::size_t i = 0; i < prey_actions.size(); ++i) {
    if (prey_actions[i] < 0 || prey_actions[i] >= actions_.joint_size()) {
      throw InputError("step: malformed action " + std::to_string(prey_actions[i]) +
                       " for prey " + std::to_string(state_.prey[i].id));
    }
  }

  state_.tick += 1;
  state_.event_log.clear();
  StepResult result;
  result.rewards.assign(state_.prey.size(), 0.0);
  const double dt = config_.tick_dt;

  for (std::size_t i = 0; i < state_.prey.size(); ++i) {
    AgentBody& b = state_.prey[i];
    const auto choice = actions_.decode(prey_actions[i]);
    const auto turn = static_cast<Turn>(choice[1]);
    if (turn == Turn::Left) b.heading = normalize_heading(b.heading + config_.prey_turn_speed * dt);
    if (turn == Turn::Right) b.heading = normalize_heading(b.heading - config_.prey_turn_speed * dt);
    const Vec2 before = b.position;
    if (static_cast<Move>(choice[0]) == Move::Forward) {
      b.position = slide(b.position, heading_vector(b.heading) * (config_.prey_move_speed * dt),
                         config_.prey_radius);
    }
    b.velocity = (b.position - before) * (1.0 / dt);
  }

  auto emit = [&](EventKind kind, std::size_t prey_index) {
    state_.event_log.push_back({state_.tick, kind, state_.prey[prey_index].id});
    result.rewards[prey_index] += event_reward(kind);
  };

  for (std::size_t i = 0; i < state_.prey.size(); ++i) {
    for (std::size_t j = 0; j < state_.points.size(); ++j) {
      PointObject& pt = state_.points[j];
      if ((state_.prey[i].position - pt.position).norm() > config_.prey_radius + pt.radius) continue;
      emit(pt.polarity == Polarity::Positive ? EventKind::PositiveCollected
                                             : EventKind::NegativeCollected,
           i);
      pt.position = free_position(pt.radius, std::nullopt, j);
    }
  }

  if (state_.predator) {
    predator_step();
    const double contact = config_.prey_radius + config_.predator_radius;
    for (std::size_t i = 0; i < state_.prey.size(); ++i) {
      AgentBody& b = state_.prey[i];
      if ((b.position - state_.predator->body.position).norm() > contact) continue;
      emit(EventKind::PreyCaught, i);
      b.position = free_position(config_.prey_radius, b.id, std::nullopt);
      b.velocity = {};
    }
  }

  result.events = state_.event_log;
  result.observations = observe_all();
  return result;
}

std::vector<std::vector<double>> World::observe_all() const {
  std::vector<std::vector<double>> out;
  out.reserve(state_.prey.size());
  for (const auto& b : state_.prey) out.push_back(observe(b.id));
  return out;
}

RayObservation World::ray_cast(int prey_id) const {
  if (prey_id < 0 || prey_id >= static_cast<int>(state_.prey.size())) {
    throw InputError("ray_cast: unknown prey id " + std::to_string(prey_id));
  }
  const AgentBody& self = state_.prey[static_cast<std::size_t>(prey_id)];
  const Rect box = config_.arena();
  RayObservation obs;
  obs.ego = self.velocity * (1.0 / config_.prey_move_speed);
  obs.rays.reserve(static_cast<std::size_t>(config_.ray_count));
  const double spacing =
      config_.ray_count > 1 ? 2.0 * config_.ray_half_angle / (config_.ray_count - 1) : 0.0;
  for (int k = 0; k < config_.ray_count; ++k) {
    const double offset = config_.ray_count > 1 ? -config_.ray_half_angle + k * spacing : 0.0;
    const Vec2 dir = heading_vector(self.heading + offset);
    double best = ray_exit_distance(self.position, dir, box);
    HitKind kind = HitKind::Wall;
    auto consider = [&](std::optional<double> t, HitKind k) {
      if (t && *t < best) {
        best = *t;
        kind = k;
      }
    };
    for (const Rect& b : config_.barrier_layout) {
      consider(ray_rect_distance(self.position, dir, b), HitKind::Wall);
    }
    for (const PointObject& pt : state_.points) {
      consider(ray_circle_distance(self.position, dir, pt.position, pt.radius),
               pt.polarity == Polarity::Positive ? HitKind::PositivePoint : HitKind::NegativePoint);
    }
    if (state_.predator) {
      consider(ray_circle_distance(self.position, dir, state_.predator->body.position,
                                   config_.predator_radius),
               HitKind::Predator);
    }
    for (const AgentBody& other : state_.prey) {
      if (other.id == self.id) continue;
      consider(ray_circle_distance(self.position, dir, other.position, config_.prey_radius),
               HitKind::Prey);
    }
    if (best > config_.ray_length) {
      obs.rays.push_back({HitKind::Nothing, 1.0});
    } else {
      obs.rays.push_back({kind, best / config_.ray_length});
    }
  }
  return obs;
}

bool World::predator_can_see(int prey_id) const {
  if (!state_.predator) throw ContractViolation("predator_can_see: world has no predator");
  if (prey_id < 0 || prey_id >= static_cast<int>(state_.prey.size())) {
    throw InputError("predator_can_see: unknown prey id " + std::to_string(prey_id));
  }
  const AgentBody& pred = state_.predator->body;
  const Vec2 target = state_.prey[static_cast<std::size_t>(prey_id)].position;
  const Vec2 to = target - pred.position;
  const double dist = to.norm();
  if (dist > config_.predator_view_radius) return false;
  if (dist > 0.0) {
    const Vec2 facing = heading_vector(pred.heading);
    const double bearing = std::abs(rad_to_deg(std::atan2(facing.cross(to), facing.dot(to))));
    if (bearing > config_.predator_view_angle / 2.0) return false;
  }
  return std::none_of(config_.barrier_layout.begin(), config_.barrier_layout.end(),
                      [&](const Rect& b) { return segment_intersects_rect(pred.position, target, b); });
}

void World::predator_step() {
  if (!state_.predator) throw ContractViolation("predator_step: world has no predator");
  PredatorState& pred = *state_.predator;
  const Vec2 start = pred.body.position;
  const double reach = config_.predator_move_speed * config_.tick_dt;

  std::optional<int> target;
  double target_dist = std::numeric_limits<double>::infinity();
  for (const AgentBody& b : state_.prey) {
    if (!predator_can_see(b.id)) continue;
    const double d = (b.position - start).norm();
    if (d < target_dist) {  // strict: ties keep the lower id
      target_dist = d;
      target = b.id;
    }
  }

  auto head_towards = [&](Vec2 goal) {
    const Vec2 to = goal - start;
    const double d = to.norm();
    if (d > 0.0) pred.body.heading = normalize_heading(rad_to_deg(std::atan2(to.y, to.x)));
    const Vec2 delta = d > reach ? to * (reach / d) : to;
    pred.body.position = slide(start, delta, config_.predator_radius);
    return d;
  };

  if (target) {
    pred.mode = PredatorMode::Chase;
    pred.target_prey_id = target;
    head_towards(state_.prey[static_cast<std::size_t>(*target)].position);
  } else {
    pred.mode = PredatorMode::Patrol;
    pred.target_prey_id.reset();
    const double d = head_towards(pred.patrol_waypoint);
    const bool arrived = d <= reach && (pred.body.position - pred.patrol_waypoint).norm() < 1e-9;
    const bool stuck = (pred.body.position - start).norm() < 1e-9;
    if (arrived || stuck) pred.patrol_waypoint = random_waypoint();
  }
  pred.body.velocity = (pred.body.position - start) * (1.0 / config_.tick_dt);
}

namespace {

void write_body(ByteWriter& w, const AgentBody& b) {
  w.f64(b.position.x);
  w.f64(b.position.y);
  w.f64(b.heading);
  w.i64(b.id);
  w.f64(b.velocity.x);
  w.f64(b.velocity.y);
}

AgentBody read_body(ByteReader& r) {
  AgentBody b;
  b.position.x = r.f64();
  b.position.y = r.f64();
  b.heading = r.f64();
  b.id = static_cast<int>(r.i64());
  b.velocity.x = r.f64();
  b.velocity.y = r.f64();
  return b;
}

}  // namespace

void World::save_state(ByteWriter& w) const {
  w.i64(state_.tick);
  w.u64(state_.prey.size());
  for (const auto& b : state_.prey) write_body(w, b);
  w.u32(state_.predator ? 1 : 0);
  if (state_.predator) {
    const auto& p = *state_.predator;
    write_body(w, p.body);
    w.u32(p.mode == PredatorMode::Chase ? 1 : 0);
    w.i64(p.target_prey_id.value_or(-1));
    w.f64(p.patrol_waypoint.x);
    w.f64(p.patrol_waypoint.y);
  }
  w.u64(state_.points.size());
  for (const auto& pt : state_.points) {
    w.f64(pt.position.x);
    w.f64(pt.position.y);
    w.u32(pt.polarity == Polarity::Positive ? 0 : 1);
    w.f64(pt.radius);
  }
  w.u64(state_.event_log.size());
  for (const auto& e : state_.event_log) {
    w.i64(e.tick);
    w.u32(static_cast<std::uint32_t>(e.kind));
    w.i64(e.prey_id);
  }
  std::ostringstream rng;
  rng << state_.rng;
  w.str(rng.str());
}

void World::load_state(ByteReader& r) {
  WorldState s;
  s.tick = r.i64();
  const auto n_prey = r.u64();
  if (n_prey != static_cast<std::uint64_t>(config_.n_prey)) {
    throw IoError("saved world has a different prey count");
  }
  for (std::uint64_t i = 0; i < n_prey; ++i) s.prey.push_back(read_body(r));
  if (r.u32() == 1) {
    PredatorState p;
    p.body = read_body(r);
    p.mode = r.u32() == 1 ? PredatorMode::Chase : PredatorMode::Patrol;
    const auto target = r.i64();
    if (target >= 0) p.target_prey_id = static_cast<int>(target);
    p.patrol_waypoint.x = r.f64();
    p.patrol_waypoint.y = r.f64();
    s.predator = p;
  }
  const auto n_points = r.u64();
  if (n_points > 1'000'000) throw IoError("saved world: implausible point count");
  for (std::uint64_t i = 0; i < n_points; ++i) {
    PointObject pt;
    pt.position.x = r.f64();
    pt.position.y = r.f64();
    pt.polarity = r.u32() == 0 ? Polarity::Positive : Polarity::Negative;
    pt.radius = r.f64();
    s.points.push_back(pt);
  }
  const auto n_events = r.u64();
  if (n_events > 1'000'000) throw IoError("saved world: implausible event count");
  for (std::uint64_t i = 0; i < n_events; ++i) {
    Event e;
    e.tick = r.i64();
    e.kind = static_cast<EventKind>(r.u32());
    e.prey_id = static_cast<int>(r.i64());
    s.event_log.push_back(e);
  }
  std::istringstream rng(r.str());
  rng >> s.rng;
  if (!rng) throw IoError("saved world: bad generator state");
  state_ = std::move(s);
}

}  // namespace predprey::env
