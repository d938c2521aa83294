#include "predprey/train/scenario.hpp"

#include "predprey/errors.hpp"

#include <string>

namespace predprey::train {

std::int64_t scenario_max_steps(int scenario_id) {
  switch (scenario_id) {
    case 1: return 580'000;
    case 2:
    case 3: return 1'000'000;
  }
  throw ConfigError("scenario_id must be 1, 2 or 3 (got " + std::to_string(scenario_id) + ")");
}

bool scenario_predator(int scenario_id) {
  scenario_max_steps(scenario_id);  // validates the id
  return scenario_id != 3;
}

ScenarioConfig ScenarioConfig::for_scenario(int scenario_id) {
  ScenarioConfig cfg;
  cfg.scenario_id = scenario_id;
  cfg.hyperparams.max_steps = scenario_max_steps(scenario_id);
  cfg.predator_in_training = scenario_predator(scenario_id);
  cfg.world.predator_present = cfg.predator_in_training;
  return cfg;
}

env::WorldConfig ScenarioConfig::training_world() const {
  env::WorldConfig w = world;
  w.predator_present = predator_in_training;
  w.seed = seed;
  return w;
}

void ScenarioConfig::validate() const {
  scenario_max_steps(scenario_id);
  hyperparams.validate();
  training_world().validate();
  if (hidden_units <= 0 || num_layers < 0) throw ConfigError("network size must be positive");
  if (num_actors <= 0) throw ConfigError("num_actors must be positive");
  if (checkpoint_interval <= 0) throw ConfigError("checkpoint_interval must be positive");
}

}  // namespace predprey::train
