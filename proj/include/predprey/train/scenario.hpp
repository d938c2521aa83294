#pragma once

#include "predprey/env/world_config.hpp"
#include "predprey/ppo/hyperparams.hpp"

#include <cstdint>
#include <vector>

namespace predprey::train {

/// One training run: scenario preset, PPO knobs, world and harness settings.
///
/// Presets: scenario 1 trains for 580,000 steps with the predator, scenario 2
/// for 1,000,000 with the predator, scenario 3 for 1,000,000 without it. All
/// other settings are shared.
struct ScenarioConfig {
  int scenario_id = 1;
  bool predator_in_training = true;
  ppo::PpoHyperparams hyperparams;
  env::WorldConfig world;
  std::uint64_t seed = 0;

  int hidden_units = 128;
  int num_layers = 2;
  int num_actors = 1;  // parallel worlds
  std::int64_t checkpoint_interval = 50'000;

  std::int64_t max_steps() const { return hyperparams.max_steps; }

  /// Preset for scenario 1, 2 or 3; throws ConfigError otherwise.
  static ScenarioConfig for_scenario(int scenario_id);

  /// World configuration used during training (predator presence follows
  /// predator_in_training).
  env::WorldConfig training_world() const;

  std::vector<int> hidden_layers() const { return std::vector<int>(static_cast<std::size_t>(num_layers), hidden_units); }

  void validate() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// max_steps preset for a scenario id.
std::int64_t scenario_max_steps(int scenario_id);
/// Predator presence preset for a scenario id.
bool scenario_predator(int scenario_id);

}  // namespace predprey::train
