#pragma once

#include "predprey/env/trajectory.hpp"
#include "predprey/env/world_config.hpp"
#include "predprey/nn/dense_net.hpp"
#include "predprey/ppo/policy.hpp"
#include "predprey/stats/efficiency.hpp"

#include <cstdint>
#include <vector>

namespace predprey::stats {

struct EvalOptions {
  int n_runs = 50;
  std::int64_t duration = 5000;  // env ticks per run
  ppo::ActionMode mode = ppo::ActionMode::Sample;
  std::uint64_t base_seed = 0;
  bool record_trajectories = false;
};

struct EvalResult {
  std::vector<RunRecord> runs;
  std::vector<env::TrajectoryRow> trajectories;  // empty unless requested
  /// Sum of per-prey step rewards for each run, in run order.
  std::vector<double> reward_sums;
};

/// Runs the policy in `n_runs` independently seeded worlds for `duration`
/// ticks each. Episodes restart every world.episode_length ticks as in
/// training. Run i uses seeds derived from (base_seed, i) only, so results do
/// not depend on which other runs are requested.
///
/// Throws StructuralError when the network input size does not match the
/// world's observation size.
EvalResult evaluate_condition(const nn::DenseNet& net, const env::WorldConfig& world,
                              const EvalOptions& options);

}  // namespace predprey::stats
