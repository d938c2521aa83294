#pragma once

#include "predprey/binary.hpp"
#include "predprey/env/world.hpp"
#include "predprey/nn/dense_net.hpp"
#include "predprey/ppo/hyperparams.hpp"
#include "predprey/ppo/policy.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace predprey::ppo {

/// One agent stream's transitions over (at most) one horizon, before
/// advantages are known.
struct Segment {
  std::vector<double> observations;  // row-major, one row per transition
  std::vector<int> actions;
  std::vector<double> log_probs;
  std::vector<double> rewards;
  std::vector<double> values;
  std::vector<std::uint8_t> episode_end;

  std::size_t size() const { return actions.size(); }
};

/// Transitions from every stream with their advantage estimates, waiting for
/// the next policy update. log_prob_old is fixed at collection time.
class RolloutBuffer {
 public:
  explicit RolloutBuffer(int obs_dim = 0) : obs_dim_(obs_dim) {}

  int obs_dim() const { return obs_dim_; }
  std::size_t size() const { return actions_.size(); }
  bool empty() const { return actions_.empty(); }
  void clear();

  /// Runs GAE over the segment (bootstrapping with V(s_T)) and appends it.
  void add_segment(const Segment& seg, double bootstrap_value, double gamma, double lambda);

  /// Appends a single already-scored transition.
  void add(std::span<const double> obs, int action, double log_prob_old, double reward,
           double value, bool episode_end, double advantage, double return_target);

  std::span<const double> observation(std::size_t i) const {
    return {observations_.data() + i * static_cast<std::size_t>(obs_dim_),
            static_cast<std::size_t>(obs_dim_)};
  }
  const std::vector<double>& observations() const { return observations_; }
  const std::vector<int>& actions() const { return actions_; }
  const std::vector<double>& log_prob_old() const { return log_prob_old_; }
  const std::vector<double>& rewards() const { return rewards_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<std::uint8_t>& episode_end() const { return episode_end_; }
  const std::vector<double>& advantages() const { return advantages_; }
  const std::vector<double>& returns() const { return returns_; }

  void save(ByteWriter& w) const;
  void load(ByteReader& r);

  friend bool operator==(const RolloutBuffer&, const RolloutBuffer&) = default;

 private:
  int obs_dim_;
  std::vector<double> observations_;
  std::vector<int> actions_;
  std::vector<double> log_prob_old_;
  std::vector<double> rewards_;
  std::vector<double> values_;
  std::vector<std::uint8_t> episode_end_;
  std::vector<double> advantages_;
  std::vector<double> returns_;
};

struct CollectStats {
  std::int64_t steps = 0;  // agent steps, summed over streams
  std::vector<double> finished_episode_rewards;  // one entry per prey per finished episode
  double entropy_sum = 0.0;
  double value_sum = 0.0;
};

/// Owns N worlds and drives every prey in them as an independent agent stream.
/// Worlds restart with fresh placements once they reach their episode length.
class RolloutCollector {
 public:
  explicit RolloutCollector(std::vector<env::World> worlds);

  std::size_t num_streams() const { return episode_return_.size(); }
  const std::vector<env::World>& worlds() const { return worlds_; }

  /// Runs the behaviour policy for `horizon` ticks in every world and appends
  /// horizon transitions per stream to `out`.
  CollectStats collect_rollout(const nn::DenseNet& net, int horizon, const PpoHyperparams& hp,
                               ActionMode mode, std::mt19937_64& rng, RolloutBuffer& out);

  void save_state(ByteWriter& w) const;
  void load_state(ByteReader& r);

 private:
  std::vector<env::World> worlds_;
  std::vector<double> episode_return_;
  ActionBranches branches_ = env::prey_action_space();
};

}  // namespace predprey::ppo
