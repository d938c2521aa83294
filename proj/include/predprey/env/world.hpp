#pragma once

#include "predprey/binary.hpp"
#include "predprey/env/actions.hpp"
#include "predprey/env/geometry.hpp"
#include "predprey/env/world_config.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace predprey::env {

struct AgentBody {
  Vec2 position;
  double heading = 0.0;  // degrees in [0, 360)
  int id = 0;
  Vec2 velocity;  // displacement over the last tick divided by tick_dt

  friend bool operator==(const AgentBody&, const AgentBody&) = default;
};

enum class PredatorMode { Patrol, Chase };

struct PredatorState {
  AgentBody body;
  PredatorMode mode = PredatorMode::Patrol;
  std::optional<int> target_prey_id;
  Vec2 patrol_waypoint;

  friend bool operator==(const PredatorState&, const PredatorState&) = default;
};

enum class Polarity { Positive, Negative };

struct PointObject {
  Vec2 position;
  Polarity polarity = Polarity::Positive;
  double radius = 0.2;

  friend bool operator==(const PointObject&, const PointObject&) = default;
};

enum class EventKind { PositiveCollected, NegativeCollected, PreyCaught };

std::string_view to_string(EventKind kind);

struct Event {
  std::int64_t tick = 0;
  EventKind kind = EventKind::PositiveCollected;
  int prey_id = 0;

  friend bool operator==(const Event&, const Event&) = default;
};

/// Reward attached to an event kind (+1, -0.2, -1).
double event_reward(EventKind kind);

/// Ray hit categories, in one-hot order.
enum class HitKind : int { PositivePoint = 0, NegativePoint, Wall, Predator, Prey, Nothing };
inline constexpr int kHitKinds = 6;

struct RayHit {
  HitKind kind = HitKind::Nothing;
  double normalized_distance = 1.0;
};

struct RayObservation {
  std::vector<RayHit> rays;
  Vec2 ego;  // velocity divided by prey move speed

  /// Flattened encoding: per ray a one-hot over HitKind then the distance,
  /// followed by the two ego features.
  std::vector<double> to_vector() const;
};

struct WorldState {
  std::int64_t tick = 0;
  std::vector<AgentBody> prey;
  std::optional<PredatorState> predator;
  std::vector<PointObject> points;
  std::mt19937_64 rng;
  std::vector<Event> event_log;  // events emitted by the most recent step

  friend bool operator==(const WorldState&, const WorldState&) = default;
};

struct StepResult {
  std::vector<double> rewards;  // indexed by prey id
  std::vector<std::vector<double>> observations;
  std::vector<Event> events;
};

/// Square arena with interior barriers, point objects, prey bodies and an
/// optional rule-based predator. A World is single-writer; separate instances
/// share nothing.
class World {
 public:
  /// Validates `config` and randomly places every entity. Throws ConfigError
  /// if the arena cannot fit all entities without overlap.
  World(WorldConfig config, std::uint64_t seed);

  const WorldConfig& config() const { return config_; }
  const WorldState& state() const { return state_; }
  /// Mutable access for scripted scenarios; callers keep the invariants.
  WorldState& mutable_state() { return state_; }

  /// Re-randomises all placements using the world's own generator and sets
  /// the tick back to 0.
  void reset_episode();

  /// Advances one tick: prey motion, point pickups, predator move, catches.
  /// `prey_actions[i]` is the joint action index for prey i.
  StepResult step(std::span<const int> prey_actions);

  RayObservation ray_cast(int prey_id) const;
  std::vector<double> observe(int prey_id) const { return ray_cast(prey_id).to_vector(); }
  std::vector<std::vector<double>> observe_all() const;

  /// Distance, cone and line-of-sight test. Throws ContractViolation if the
  /// world has no predator.
  bool predator_can_see(int prey_id) const;

  /// Advances the predator's rule-based controller by one tick.
  void predator_step();

  void save_state(ByteWriter& w) const;
  void load_state(ByteReader& r);

 private:
  void place_all();
  Vec2 free_position(double radius, std::optional<int> skip_prey, std::optional<std::size_t> skip_point);
  bool position_free(Vec2 p, double radius, std::optional<int> skip_prey,
                     std::optional<std::size_t> skip_point, bool skip_predator) const;
  bool blocked(Vec2 p, double radius) const;
  Vec2 slide(Vec2 from, Vec2 delta, double radius) const;
  Vec2 random_waypoint();

  WorldConfig config_;
  WorldState state_;
  ActionBranches actions_ = prey_action_space();
};

}  // namespace predprey::env
