#pragma once

#include "predprey/env/world_config.hpp"
#include "predprey/train/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace predprey::io {

/// Where a resolved value came from.
enum class Source { Default, File, Flag };
std::string_view to_string(Source s);

using Provenance = std::map<std::string, Source>;
/// key = value pairs given on the command line; applied after the file.
using Overrides = std::vector<std::pair<std::string, std::string>>;

/// Settings for one evaluation condition.
struct EvalConfig {
  std::string condition_id = "condition";
  std::string checkpoint;
  env::WorldConfig world;  // world.predator_present is the test-time presence
  int n_runs = 50;
  std::int64_t duration = 5000;
  bool greedy = false;
  std::uint64_t seed = 0;
  bool record_trajectories = false;

  friend bool operator==(const EvalConfig&, const EvalConfig&) = default;
};

template <typename Config>
struct Resolved {
  Config config;
  Provenance provenance;
  std::vector<std::string> warnings;  // soft range checks, never fatal
};

/// Flat "key = value" text, '#' starts a comment. scenario_id selects the
/// preset (max_steps, predator_in_training) before the remaining keys are
/// applied, so explicit keys always win. Unknown or repeated keys and
/// unparsable values throw ConfigError naming the key.
Resolved<train::ScenarioConfig> parse_train_config(std::string_view text, const Overrides& flags = {});
Resolved<EvalConfig> parse_eval_config(std::string_view text, const Overrides& flags = {});

/// Reads the file (IoError if unreadable) or, when `path` is empty, resolves
/// from defaults and flags alone.
Resolved<train::ScenarioConfig> load_train_config(const std::optional<std::filesystem::path>& path,
                                                  const Overrides& flags = {});
Resolved<EvalConfig> load_eval_config(const std::optional<std::filesystem::path>& path,
                                      const Overrides& flags = {});

/// Every key with its value; provenance, when given, is appended as a comment.
/// Parsing the output reproduces the config exactly.
void write_resolved(std::ostream& out, const train::ScenarioConfig& cfg, const Provenance* provenance = nullptr);
void write_resolved(std::ostream& out, const EvalConfig& cfg, const Provenance* provenance = nullptr);

/// "x0 y0 x1 y1; ..." or "none".
std::string format_barriers(const std::vector<env::Rect>& rects);
std::vector<env::Rect> parse_barriers(std::string_view text);

}  // namespace predprey::io
