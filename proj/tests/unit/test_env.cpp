#include "predprey/env/actions.hpp"
#include "predprey/env/geometry.hpp"
#include "predprey/env/trajectory.hpp"
#include "predprey/env/world.hpp"
#include "predprey/errors.hpp"

#include "../support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

using namespace predprey;
using namespace predprey::env;

namespace {

// One prey, no barriers, nothing else near the arena centre.
WorldConfig open_config(bool predator = false) {
  WorldConfig c;
  c.barrier_layout.clear();
  c.n_prey = 1;
  c.n_positive_points = 1;
  c.n_negative_points = 1;
  c.predator_present = predator;
  return c;
}

// Parks every point in a far corner so scripted tests only see what they place.
void park_points(World& w) {
  for (auto& pt : w.mutable_state().points) pt.position = {4.5, 4.5};
}

using oracle::inside_any_barrier;
using oracle::inside_arena;

}  // namespace

TEST(Actions, PreyBranchesAndEncoding) {
  const auto a = prey_action_space();
  EXPECT_EQ(a.sizes(), (std::vector<int>{2, 3}));
  EXPECT_EQ(a.joint_size(), 6);
  EXPECT_EQ(a.logit_count(), 5);
  EXPECT_EQ(a.encode({1, 1}), 4);
  EXPECT_EQ(encode_prey_action(Move::Forward, Turn::Left), 4);
  for (int j = 0; j < 6; ++j) EXPECT_EQ(a.encode(a.decode(j)), j);
  EXPECT_THROW(a.decode(6), InputError);
  EXPECT_THROW(a.encode({2, 0}), InputError);
}

TEST(Geometry, HeadingNormalisation) {
  EXPECT_EQ(normalize_heading(360.0), 0.0);
  EXPECT_EQ(normalize_heading(-15.0), 345.0);
  EXPECT_NEAR(normalize_heading(725.0), 5.0, 1e-12);
  const Vec2 up = heading_vector(90.0);
  EXPECT_NEAR(up.x, 0.0, 1e-15);
  EXPECT_NEAR(up.y, 1.0, 1e-15);
}

TEST(Geometry, RayDistances) {
  const Rect r{{1.0, -1.0}, {2.0, 1.0}};
  EXPECT_NEAR(*ray_rect_distance({0, 0}, {1, 0}, r), 1.0, 1e-12);
  EXPECT_FALSE(ray_rect_distance({0, 0}, {-1, 0}, r));
  EXPECT_NEAR(*ray_circle_distance({0, 0}, {1, 0}, {3, 0}, 0.5), 2.5, 1e-12);
  EXPECT_FALSE(ray_circle_distance({0, 0}, {1, 0}, {3, 2}, 0.5));
  EXPECT_NEAR(ray_exit_distance({0, 0}, {0, 1}, Rect{{-5, -5}, {5, 5}}), 5.0, 1e-12);
}

TEST(Geometry, SegmentRectAgreesWithEdgeOracle) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const Rect r{{-0.5, -1.0}, {0.5, 1.0}};
  for (int i = 0; i < 5000; ++i) {
    const Vec2 a{u(rng), u(rng)}, b{u(rng), u(rng)};
    EXPECT_EQ(segment_intersects_rect(a, b, r), oracle::segment_meets_rect(a, b, r)) << i;
  }
}

TEST(World, ResetIsDeterministic) {
  const World a(WorldConfig{}, 99);
  const World b(WorldConfig{}, 99);
  EXPECT_EQ(a.state(), b.state());
  const World c(WorldConfig{}, 100);
  EXPECT_NE(a.state().prey[0].position, c.state().prey[0].position);
}

TEST(World, NoPredatorWhenAbsent) {
  WorldConfig c;
  c.predator_present = false;
  const World w(c, 1);
  EXPECT_FALSE(w.state().predator.has_value());
  EXPECT_THROW(w.predator_can_see(0), ContractViolation);
}

TEST(World, PlacementAvoidsBarriersAndOverlap) {
  const WorldConfig c;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const World w(c, seed);
    const auto& s = w.state();
    EXPECT_EQ(s.tick, 0);
    for (const auto& b : s.prey) {
      EXPECT_TRUE(inside_arena(b.position, c.prey_radius, c));
      EXPECT_FALSE(inside_any_barrier(b.position, c.prey_radius, c));
      for (const auto& pt : s.points) EXPECT_GE((b.position - pt.position).norm(), c.prey_radius + c.point_radius);
    }
    for (const auto& pt : s.points) EXPECT_FALSE(inside_any_barrier(pt.position, c.point_radius, c));
    EXPECT_FALSE(inside_any_barrier(s.predator->body.position, c.predator_radius, c));
  }
}

TEST(World, OvercrowdedArenaIsAConfigError) {
  WorldConfig c;
  c.arena_side = 2.0;
  c.barrier_layout.clear();
  c.n_positive_points = 200;
  EXPECT_THROW(World(c, 0), ConfigError);
}

TEST(World, InvalidConfigRejected) {
  WorldConfig c;
  c.predator_view_angle = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = WorldConfig{};
  c.barrier_layout.push_back({{4.0, 4.0}, {6.0, 6.0}});
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(World, MalformedActionNamesTheAgent) {
  World w(WorldConfig{}, 5);
  std::vector<int> actions(6, 0);
  actions[3] = 7;
  try {
    w.step(actions);
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("prey 3"), std::string::npos);
  }
  EXPECT_THROW(w.step(std::vector<int>(5, 0)), InputError);
}

TEST(World, NoOpStepLeavesPreyStill) {
  World w(open_config(), 2);
  park_points(w);
  w.mutable_state().prey[0].position = {0.0, 0.0};
  const auto before = w.state().prey[0];
  const auto r = w.step(std::vector<int>{encode_prey_action(Move::None, Turn::None)});
  EXPECT_EQ(r.rewards, std::vector<double>{0.0});
  EXPECT_TRUE(r.events.empty());
  EXPECT_EQ(w.state().prey[0].position, before.position);
  EXPECT_EQ(w.state().prey[0].heading, before.heading);
  EXPECT_EQ(w.state().tick, 1);
}

TEST(World, ForwardAndTurnKinematics) {
  World w(open_config(), 2);
  park_points(w);
  auto& prey = w.mutable_state().prey[0];
  prey.position = {0.0, 0.0};
  prey.heading = 0.0;
  w.step(std::vector<int>{encode_prey_action(Move::Forward, Turn::None)});
  EXPECT_NEAR(w.state().prey[0].position.x, 0.1, 1e-12);
  EXPECT_NEAR(w.state().prey[0].velocity.x, 2.0, 1e-9);
  w.step(std::vector<int>{encode_prey_action(Move::None, Turn::Left)});
  EXPECT_NEAR(w.state().prey[0].heading, 15.0, 1e-12);
  w.step(std::vector<int>{encode_prey_action(Move::None, Turn::Right)});
  w.step(std::vector<int>{encode_prey_action(Move::None, Turn::Right)});
  EXPECT_NEAR(w.state().prey[0].heading, 345.0, 1e-12);
}

TEST(World, PositivePickupRewardsAndRespawns) {
  World w(open_config(), 4);
  park_points(w);
  auto& s = w.mutable_state();
  s.prey[0].position = {0.0, 0.0};
  s.points[0].position = {0.3, 0.0};  // positive point already touching
  const auto r = w.step(std::vector<int>{0});
  EXPECT_EQ(r.rewards, std::vector<double>{1.0});
  ASSERT_EQ(r.events.size(), 1u);
  EXPECT_EQ(r.events[0].kind, EventKind::PositiveCollected);
  EXPECT_EQ(r.events[0].prey_id, 0);
  EXPECT_NE(w.state().points[0].position, (Vec2{0.3, 0.0}));
  EXPECT_EQ(w.state().points[0].polarity, Polarity::Positive);
}

TEST(World, HalfStepGapToNegativePoint) {
  // Surface gap of half a step straight ahead: moving forward closes it.
  const WorldConfig c = open_config();
  const double gap = c.prey_move_speed * c.tick_dt / 2.0;
  for (bool forward : {true, false}) {
    World w(c, 8);
    park_points(w);
    auto& s = w.mutable_state();
    s.prey[0].position = {0.0, 0.0};
    s.prey[0].heading = 0.0;
    s.points[1].position = {c.prey_radius + c.point_radius + gap, 0.0};
    const int a = encode_prey_action(forward ? Move::Forward : Move::None, Turn::None);
    const auto r = w.step(std::vector<int>{a});
    EXPECT_EQ(r.rewards[0], forward ? -0.2 : 0.0);
  }
}

TEST(World, PreySlidesAlongWalls) {
  World w(open_config(), 2);
  park_points(w);
  const WorldConfig& c = w.config();
  auto& prey = w.mutable_state().prey[0];
  prey.position = {c.half_side() - c.prey_radius, 0.0};
  prey.heading = 45.0;
  w.step(std::vector<int>{encode_prey_action(Move::Forward, Turn::None)});
  EXPECT_NEAR(w.state().prey[0].position.x, c.half_side() - c.prey_radius, 1e-12);
  EXPECT_NEAR(w.state().prey[0].position.y, 0.1 * std::sin(M_PI / 4), 1e-12);
}

TEST(World, PredatorContactCatchesAndTeleports) {
  World w(open_config(true), 3);
  park_points(w);
  auto& s = w.mutable_state();
  s.prey[0].position = {0.0, 0.0};
  s.predator->body.position = {0.6, 0.0};
  s.predator->body.heading = 180.0;
  const auto r = w.step(std::vector<int>{0});
  EXPECT_EQ(r.rewards, std::vector<double>{-1.0});
  ASSERT_EQ(r.events.size(), 1u);
  EXPECT_EQ(r.events[0].kind, EventKind::PreyCaught);
  EXPECT_GE((w.state().prey[0].position - w.state().predator->body.position).norm(), 0.65);
}

TEST(RayCast, CentredPreySeesWallsOnly) {
  WorldConfig c = open_config();
  c.n_positive_points = 1;
  World w(c, 1);
  park_points(w);
  for (auto& pt : w.mutable_state().points) pt.position = {-4.8, -4.8};
  auto& prey = w.mutable_state().prey[0];
  prey.position = {0.0, 0.0};
  prey.heading = 0.0;
  const auto obs = w.ray_cast(0);
  ASSERT_EQ(obs.rays.size(), 11u);
  for (int k = 0; k < 11; ++k) {
    const double angle = -70.0 + 14.0 * k;
    const double to_wall = c.half_side() / std::cos(deg_to_rad(std::abs(angle) > 45 ? 90 - std::abs(angle) : angle));
    if (to_wall > c.ray_length) {
      EXPECT_EQ(obs.rays[k].kind, HitKind::Nothing);
      EXPECT_EQ(obs.rays[k].normalized_distance, 1.0);
    } else {
      EXPECT_EQ(obs.rays[k].kind, HitKind::Wall);
      EXPECT_NEAR(obs.rays[k].normalized_distance, to_wall / c.ray_length, 1e-12);
    }
  }
  EXPECT_EQ(w.observe(0).size(), 79u);
}

TEST(RayCast, PointAheadAtHalfRange) {
  WorldConfig c = open_config();
  c.arena_side = 30.0;
  World w(c, 1);
  park_points(w);
  auto& s = w.mutable_state();
  s.prey[0].position = {0.0, 0.0};
  s.prey[0].heading = 90.0;
  s.points[0].position = {0.0, 5.0 + c.point_radius};  // front surface at half the ray length
  const auto hit = w.ray_cast(0).rays[5];
  EXPECT_EQ(hit.kind, HitKind::PositivePoint);
  EXPECT_NEAR(hit.normalized_distance, 0.5, 1e-12);
  const auto v = w.observe(0);
  EXPECT_EQ(v[5 * 7 + 0], 1.0);
  EXPECT_NEAR(v[5 * 7 + 6], 0.5, 1e-12);
}

TEST(RayCast, BarrierOccludesPoint) {
  WorldConfig c = open_config();
  c.barrier_layout = {Rect{{1.0, -1.0}, {1.5, 1.0}}};
  World w(c, 1);
  park_points(w);
  auto& s = w.mutable_state();
  s.prey[0].position = {-2.0, 0.0};
  s.prey[0].heading = 0.0;
  s.points[0].position = {3.0, 0.0};
  const auto hit = w.ray_cast(0).rays[5];
  EXPECT_EQ(hit.kind, HitKind::Wall);
  EXPECT_NEAR(hit.normalized_distance, 0.3, 1e-12);
}

TEST(Predator, VisibilityExamples) {
  World w(open_config(true), 1);
  auto& s = w.mutable_state();
  s.predator->body.position = {-4.0, 0.0};
  s.predator->body.heading = 0.0;
  s.prey[0].position = {1.0, 0.0};
  EXPECT_TRUE(w.predator_can_see(0));
  WorldConfig big = open_config(true);
  big.arena_side = 30.0;
  World far(big, 1);
  far.mutable_state().predator->body.position = {0.0, 0.0};
  far.mutable_state().predator->body.heading = 0.0;
  far.mutable_state().prey[0].position = {11.0, 0.0};
  EXPECT_FALSE(far.predator_can_see(0));
  far.mutable_state().prey[0].position = {-5.0, 0.0};
  EXPECT_FALSE(far.predator_can_see(0));
}

TEST(Predator, VisibilityAgreesWithOracle) {
  const WorldConfig c;
  World w(c, 17);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> coord(-c.half_side(), c.half_side()), angle(0.0, 360.0);
  for (int i = 0; i < 2000; ++i) {
    auto& s = w.mutable_state();
    s.predator->body.position = {coord(rng), coord(rng)};
    s.predator->body.heading = angle(rng);
    s.prey[0].position = {coord(rng), coord(rng)};
    const bool expected = oracle::can_see(s.predator->body.position, s.predator->body.heading, s.prey[0].position,
                                          c.predator_view_radius, c.predator_view_angle, c.barrier_layout);
    EXPECT_EQ(w.predator_can_see(0), expected) << i;
  }
}

TEST(Predator, ChasesNearestVisiblePrey) {
  WorldConfig c = open_config(true);
  c.n_prey = 3;
  World w(c, 6);
  park_points(w);
  auto& s = w.mutable_state();
  s.predator->body.position = {-4.0, 0.0};
  s.predator->body.heading = 0.0;
  s.prey[0].position = {3.0, 0.5};   // distance ~7
  s.prey[1].position = {-1.0, -0.5};  // distance ~3
  s.prey[2].position = {-4.0, 4.0};   // outside the cone
  w.predator_step();
  EXPECT_EQ(w.state().predator->mode, PredatorMode::Chase);
  EXPECT_EQ(w.state().predator->target_prey_id, 1);
  const double expected = rad_to_deg(std::atan2(-0.5, 3.0));
  EXPECT_NEAR(w.state().predator->body.heading, normalize_heading(expected), 1e-9);
}

TEST(Predator, EqualDistanceTieGoesToLowerId) {
  WorldConfig c = open_config(true);
  c.n_prey = 2;
  World w(c, 6);
  auto& s = w.mutable_state();
  s.predator->body.position = {0.0, 0.0};
  s.predator->body.heading = 0.0;
  s.prey[1].position = {3.0, 1.0};
  s.prey[0].position = {3.0, -1.0};
  w.predator_step();
  EXPECT_EQ(w.state().predator->target_prey_id, 0);
}

TEST(Predator, PatrolDrawsNewWaypointOnArrival) {
  World w(open_config(true), 6);
  auto& s = w.mutable_state();
  s.prey[0].position = {-4.0, -4.0};
  s.predator->body.position = {0.0, 0.0};
  s.predator->body.heading = 90.0;
  s.predator->patrol_waypoint = {0.5, 0.0};  // within one tick's reach
  w.predator_step();
  EXPECT_EQ(w.state().predator->mode, PredatorMode::Patrol);
  EXPECT_FALSE(w.state().predator->target_prey_id.has_value());
  EXPECT_EQ(w.state().predator->body.position, (Vec2{0.5, 0.0}));
  EXPECT_NE(w.state().predator->patrol_waypoint, (Vec2{0.5, 0.0}));
}

TEST(World, RandomPlayInvariants) {
  const WorldConfig c;
  World w(c, 21);
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> act(0, 5);
  std::vector<int> actions(static_cast<std::size_t>(c.n_prey));
  double reward_sum = 0.0;
  long pos = 0, neg = 0, caught = 0;
  for (int t = 0; t < 10'000; ++t) {
    for (int& a : actions) a = act(rng);
    World before = w;
    before.mutable_state().predator.reset();
    before.step(actions);  // same prey motion, no predator: pre-teleport positions
    const auto r = w.step(actions);
    for (double x : r.rewards) reward_sum += x;
    for (const auto& e : r.events) {
      pos += e.kind == EventKind::PositiveCollected;
      neg += e.kind == EventKind::NegativeCollected;
      if (e.kind == EventKind::PreyCaught) {
        ++caught;
        const Vec2 at = before.state().prey[static_cast<std::size_t>(e.prey_id)].position;
        EXPECT_LE((at - w.state().predator->body.position).norm(), c.prey_radius + c.predator_radius + 1e-12);
      }
    }
    const auto& s = w.state();
    for (const auto& b : s.prey) {
      ASSERT_TRUE(inside_arena(b.position, c.prey_radius, c));
      ASSERT_FALSE(inside_any_barrier(b.position, c.prey_radius, c));
      ASSERT_GE(b.heading, 0.0);
      ASSERT_LT(b.heading, 360.0);
    }
    ASSERT_TRUE(inside_arena(s.predator->body.position, c.predator_radius, c));
    ASSERT_FALSE(inside_any_barrier(s.predator->body.position, c.predator_radius, c));
    ASSERT_EQ(s.predator->mode == PredatorMode::Chase, s.predator->target_prey_id.has_value());
    long n_pos = 0;
    for (const auto& pt : s.points) n_pos += pt.polarity == Polarity::Positive;
    ASSERT_EQ(n_pos, c.n_positive_points);
    ASSERT_EQ(static_cast<long>(s.points.size()) - n_pos, c.n_negative_points);
  }
  EXPECT_NEAR(reward_sum, pos * 1.0 + neg * -0.2 + caught * -1.0, 1e-9);
  EXPECT_GT(pos + neg + caught, 0);
}

TEST(World, SameActionsSameTrajectory) {
  World a(WorldConfig{}, 33), b(WorldConfig{}, 33);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> act(0, 5);
  for (int t = 0; t < 500; ++t) {
    std::vector<int> actions(6);
    for (int& x : actions) x = act(rng);
    const auto ra = a.step(actions);
    const auto rb = b.step(actions);
    ASSERT_EQ(ra.events, rb.events);
  }
  EXPECT_EQ(a.state(), b.state());
}

TEST(World, SaveLoadState) {
  World a(WorldConfig{}, 44);
  for (int t = 0; t < 50; ++t) a.step(std::vector<int>(6, 4));
  ByteWriter out;
  a.save_state(out);
  World b(WorldConfig{}, 0);
  const std::string bytes = out.take();
  ByteReader in(bytes);
  b.load_state(in);
  EXPECT_EQ(a.state(), b.state());
  a.step(std::vector<int>(6, 1));
  b.step(std::vector<int>(6, 1));
  EXPECT_EQ(a.state(), b.state());
}

TEST(Trajectory, FrameRowsAndCsvRoundTrip) {
  World w(WorldConfig{}, 2);
  std::vector<TrajectoryRow> rows;
  append_frame(w, 7, rows);
  EXPECT_EQ(rows.size(), 6u + 1u + 20u);
  EXPECT_EQ(rows.front().entity_kind, "prey");
  const auto dir = std::filesystem::temp_directory_path() / "predprey_traj_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "t.csv");
    write_trajectory_header(out);
    write_trajectory_rows(out, rows);
  }
  // Coordinates are written with 10 significant digits.
  const auto back = read_trajectory_csv(dir / "t.csv");
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].run_id, rows[i].run_id);
    EXPECT_EQ(back[i].tick, rows[i].tick);
    EXPECT_EQ(back[i].entity_kind, rows[i].entity_kind);
    EXPECT_EQ(back[i].entity_id, rows[i].entity_id);
    EXPECT_NEAR(back[i].x, rows[i].x, 1e-8);
    EXPECT_NEAR(back[i].y, rows[i].y, 1e-8);
    EXPECT_NEAR(back[i].heading, rows[i].heading, 1e-6);
    EXPECT_EQ(back[i].event, rows[i].event);
  }
  std::filesystem::remove_all(dir);
}
