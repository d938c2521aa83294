#pragma once

#include "predprey/nn/adam.hpp"
#include "predprey/nn/checkpoint.hpp"
#include "predprey/nn/dense_net.hpp"
#include "predprey/nn/lr_schedule.hpp"
#include "predprey/ppo/rollout.hpp"
#include "predprey/ppo/update.hpp"
#include "predprey/train/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <vector>

namespace predprey::train {

/// One summary row, emitted every summary_freq global steps. Fields with no
/// data in the window (no finished episode, no update) are NaN.
struct MetricsRow {
  std::int64_t global_step = 0;
  double cumulative_reward_mean = 0.0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double extrinsic_reward_mean = 0.0;  // same as cumulative reward: extrinsic is the only signal
  double value_estimate_mean = 0.0;
};

/// Mean per-prey return of one finished episode, stamped with the global step
/// at which it finished.
struct EpisodeSummary {
  std::int64_t global_step = 0;
  double mean_reward = 0.0;
};

inline constexpr const char* kMetricsHeader =
    "global_step,mean_cumulative_episode_reward,policy_loss,value_loss,entropy,mean_value_estimate";

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows);
void write_metrics_csv(const std::filesystem::path& path, const std::vector<MetricsRow>& rows);

/// Runs collect/update iterations of PPO for one ScenarioConfig. Global step
/// counts agent steps summed over all prey streams.
class Trainer {
 public:
  explicit Trainer(ScenarioConfig cfg);

  /// Restores a trainer from a checkpoint written by save(). The config must
  /// be the one the checkpoint was trained with.
  static Trainer resume(ScenarioConfig cfg, const std::filesystem::path& checkpoint);

  /// When set, periodic and final checkpoints plus metrics.csv go here.
  /// The directory is created if missing.
  void set_output_dir(std::filesystem::path dir);

  /// One collection sweep (time_horizon ticks in every world), followed by a
  /// policy update if the buffer has reached buffer_size.
  void iterate();

  /// Iterates until global_step >= step (or max_steps, whichever is first).
  void run_until(std::int64_t step);

  /// Iterates until max_steps, then writes the final checkpoint and metrics.
  void run();

  bool finished() const { return global_step_ >= cfg_.max_steps(); }
  std::int64_t global_step() const { return global_step_; }
  int update_count() const { return updates_; }
  const ScenarioConfig& config() const { return cfg_; }
  const nn::DenseNet& net() const { return net_; }
  const std::vector<MetricsRow>& metrics() const { return metrics_; }
  const std::vector<EpisodeSummary>& episodes() const { return episodes_; }
  std::optional<ppo::UpdateStats> last_update() const { return last_update_; }

  nn::Checkpoint checkpoint() const;
  void save(const std::filesystem::path& path) const;

 private:
  struct Window {
    double episode_reward_sum = 0.0;
    std::int64_t episodes = 0;
    double entropy_sum = 0.0;
    double value_sum = 0.0;
    std::int64_t decisions = 0;
    double policy_loss_sum = 0.0;
    double value_loss_sum = 0.0;
    std::int64_t updates = 0;
  };

  void emit_rows();
  void maybe_checkpoint();
  std::string encode_state() const;
  void decode_state(std::string_view bytes);

  ScenarioConfig cfg_;
  env::ActionBranches branches_ = env::prey_action_space();
  nn::DenseNet net_;
  nn::AdamState adam_;
  nn::LrSchedule schedule_;
  ppo::RolloutCollector collector_;
  ppo::RolloutBuffer buffer_;
  std::mt19937_64 rng_;

  std::int64_t global_step_ = 0;
  std::int64_t next_summary_ = 0;
  std::int64_t next_checkpoint_ = 0;
  int updates_ = 0;
  Window window_;
  std::vector<MetricsRow> metrics_;
  std::vector<EpisodeSummary> episodes_;
  std::optional<ppo::UpdateStats> last_update_;
  std::optional<std::filesystem::path> output_dir_;
};

}  // namespace predprey::train
