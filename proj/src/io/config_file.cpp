#include "predprey/io/config_file.hpp"

#include "predprey/errors.hpp"
#include "predprey/format.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

namespace predprey::io {

std::string_view to_string(Source s) {
  switch (s) {
    case Source::Default: return "default";
    case Source::File: return "file";
    case Source::Flag: return "flag";
  }
  return "?";
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("key '" + std::string(key) + "': cannot parse '" + std::string(text) + "'");
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError("key '" + std::string(key) + "': expected true or false, got '" + std::string(text) + "'");
}

template <typename Config>
struct Field {
  std::string name;
  std::function<void(Config&, std::string_view)> set;
  std::function<std::string(const Config&)> get;
};

template <typename Config, typename Access>
void add(std::vector<Field<Config>>& fields, std::string name, Access access) {
  using T = std::remove_cvref_t<decltype(access(std::declval<Config&>()))>;
  Field<Config> f;
  f.name = name;
  f.set = [access, name](Config& c, std::string_view text) {
    if constexpr (std::is_same_v<T, bool>) {
      access(c) = parse_bool(name, text);
    } else if constexpr (std::is_same_v<T, std::string>) {
      access(c) = std::string(text);
    } else if constexpr (std::is_same_v<T, std::vector<env::Rect>>) {
      try {
        access(c) = parse_barriers(text);
      } catch (const ConfigError& e) {
        throw ConfigError("key '" + name + "': " + e.what());
      }
    } else {
      access(c) = parse_number<T>(name, text);
    }
  };
  f.get = [access](const Config& c) -> std::string {
    const auto& v = access(const_cast<Config&>(c));
    if constexpr (std::is_same_v<T, bool>) {
      return v ? "true" : "false";
    } else if constexpr (std::is_same_v<T, std::string>) {
      return v;
    } else if constexpr (std::is_same_v<T, std::vector<env::Rect>>) {
      return format_barriers(v);
    } else if constexpr (std::is_floating_point_v<T>) {
      return format_double(v);
    } else {
      return std::to_string(v);
    }
  };
  fields.push_back(std::move(f));
}

#define FIELD(fields, Config, key, expr) add<Config>(fields, key, [](Config& c) -> auto& { return expr; })

template <typename Config, typename WorldOf>
void add_world_fields(std::vector<Field<Config>>& fields, WorldOf) {
  FIELD(fields, Config, "arena_side", WorldOf{}(c).arena_side);
  FIELD(fields, Config, "barrier_layout", WorldOf{}(c).barrier_layout);
  FIELD(fields, Config, "n_prey", WorldOf{}(c).n_prey);
  FIELD(fields, Config, "n_positive_points", WorldOf{}(c).n_positive_points);
  FIELD(fields, Config, "n_negative_points", WorldOf{}(c).n_negative_points);
  FIELD(fields, Config, "prey_move_speed", WorldOf{}(c).prey_move_speed);
  FIELD(fields, Config, "prey_turn_speed", WorldOf{}(c).prey_turn_speed);
  FIELD(fields, Config, "predator_move_speed", WorldOf{}(c).predator_move_speed);
  FIELD(fields, Config, "predator_view_radius", WorldOf{}(c).predator_view_radius);
  FIELD(fields, Config, "predator_view_angle", WorldOf{}(c).predator_view_angle);
  FIELD(fields, Config, "prey_radius", WorldOf{}(c).prey_radius);
  FIELD(fields, Config, "predator_radius", WorldOf{}(c).predator_radius);
  FIELD(fields, Config, "point_radius", WorldOf{}(c).point_radius);
  FIELD(fields, Config, "ray_count", WorldOf{}(c).ray_count);
  FIELD(fields, Config, "ray_half_angle", WorldOf{}(c).ray_half_angle);
  FIELD(fields, Config, "ray_length", WorldOf{}(c).ray_length);
  FIELD(fields, Config, "tick_dt", WorldOf{}(c).tick_dt);
  FIELD(fields, Config, "episode_length", WorldOf{}(c).episode_length);
}

struct TrainWorld {
  env::WorldConfig& operator()(train::ScenarioConfig& c) const { return c.world; }
};
struct EvalWorld {
  env::WorldConfig& operator()(EvalConfig& c) const { return c.world; }
};

const std::vector<Field<train::ScenarioConfig>>& train_fields() {
  using C = train::ScenarioConfig;
  static const auto fields = [] {
    std::vector<Field<C>> f;
    FIELD(f, C, "scenario_id", c.scenario_id);
    FIELD(f, C, "predator_in_training", c.predator_in_training);
    FIELD(f, C, "seed", c.seed);
    FIELD(f, C, "batch_size", c.hyperparams.batch_size);
    FIELD(f, C, "buffer_size", c.hyperparams.buffer_size);
    FIELD(f, C, "epsilon", c.hyperparams.epsilon);
    FIELD(f, C, "beta", c.hyperparams.beta);
    FIELD(f, C, "gamma", c.hyperparams.gamma);
    FIELD(f, C, "lambda", c.hyperparams.lambda);
    FIELD(f, C, "num_epoch", c.hyperparams.num_epoch);
    FIELD(f, C, "time_horizon", c.hyperparams.time_horizon);
    FIELD(f, C, "learning_rate", c.hyperparams.learning_rate);
    FIELD(f, C, "max_steps", c.hyperparams.max_steps);
    FIELD(f, C, "value_loss_coeff", c.hyperparams.value_loss_coeff);
    FIELD(f, C, "summary_freq", c.hyperparams.summary_freq);
    FIELD(f, C, "normalize_advantages", c.hyperparams.normalize_advantages);
    FIELD(f, C, "hidden_units", c.hidden_units);
    FIELD(f, C, "num_layers", c.num_layers);
    FIELD(f, C, "num_actors", c.num_actors);
    FIELD(f, C, "checkpoint_interval", c.checkpoint_interval);
    add_world_fields(f, TrainWorld{});
    return f;
  }();
  return fields;
}

const std::vector<Field<EvalConfig>>& eval_fields() {
  using C = EvalConfig;
  static const auto fields = [] {
    std::vector<Field<C>> f;
    FIELD(f, C, "condition_id", c.condition_id);
    FIELD(f, C, "checkpoint", c.checkpoint);
    FIELD(f, C, "n_runs", c.n_runs);
    FIELD(f, C, "duration", c.duration);
    FIELD(f, C, "greedy", c.greedy);
    FIELD(f, C, "seed", c.seed);
    FIELD(f, C, "record_trajectories", c.record_trajectories);
    FIELD(f, C, "predator_present", c.world.predator_present);
    add_world_fields(f, EvalWorld{});
    return f;
  }();
  return fields;
}

#undef FIELD

struct Entry {
  std::string key;
  std::string value;
  Source source;
};

std::vector<Entry> collect(std::string_view text, const Overrides& flags) {
  std::vector<Entry> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": missing key");
    const bool dup = std::any_of(out.begin(), out.end(), [&](const Entry& e) { return e.key == key; });
    if (dup) throw ConfigError("key '" + key + "' is set more than once");
    out.push_back({key, std::string(trim(line.substr(eq + 1))), Source::File});
  }
  for (const auto& [k, v] : flags) {
    auto it = std::find_if(out.begin(), out.end(), [&](const Entry& e) { return e.key == k; });
    if (it != out.end()) {
      it->value = v;
      it->source = Source::Flag;
    } else {
      out.push_back({k, v, Source::Flag});
    }
  }
  return out;
}

template <typename Config>
void apply(Config& cfg, Provenance& prov, const std::vector<Field<Config>>& fields,
           const std::vector<Entry>& entries, std::string_view skip) {
  for (const auto& e : entries) {
    if (e.key == skip) continue;
    auto it = std::find_if(fields.begin(), fields.end(), [&](const Field<Config>& f) { return f.name == e.key; });
    if (it == fields.end()) throw ConfigError("unknown key '" + e.key + "'");
    it->set(cfg, e.value);
    prov[e.key] = e.source;
  }
}

template <typename Config>
Provenance all_default(const std::vector<Field<Config>>& fields) {
  Provenance p;
  for (const auto& f : fields) p[f.name] = Source::Default;
  return p;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename Config>
void write_fields(std::ostream& out, const Config& cfg, const std::vector<Field<Config>>& fields,
                  const Provenance* provenance) {
  for (const auto& f : fields) {
    out << f.name << " = " << f.get(cfg);
    if (provenance) {
      const auto it = provenance->find(f.name);
      out << "  # " << to_string(it == provenance->end() ? Source::Default : it->second);
    }
    out << '\n';
  }
}

}  // namespace

std::string format_barriers(const std::vector<env::Rect>& rects) {
  if (rects.empty()) return "none";
  std::string out;
  for (std::size_t i = 0; i < rects.size(); ++i) {
    if (i) out += "; ";
    const auto& r = rects[i];
    out += format_double(r.min.x) + ' ' + format_double(r.min.y) + ' ' + format_double(r.max.x) + ' ' +
           format_double(r.max.y);
  }
  return out;
}

std::vector<env::Rect> parse_barriers(std::string_view text) {
  text = trim(text);
  std::vector<env::Rect> out;
  if (text == "none" || text.empty()) return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find(';', pos), text.size());
    std::istringstream part{std::string(text.substr(pos, end - pos))};
    pos = end + 1;
    double v[4];
    std::string token;
    for (double& x : v) {
      if (!(part >> token)) throw ConfigError("barrier needs four numbers 'x0 y0 x1 y1'");
      x = parse_number<double>("barrier_layout", token);
    }
    if (part >> token) throw ConfigError("barrier has more than four numbers");
    if (!(v[2] > v[0] && v[3] > v[1])) throw ConfigError("barrier max corner must exceed min corner");
    out.push_back({{v[0], v[1]}, {v[2], v[3]}});
  }
  return out;
}

Resolved<train::ScenarioConfig> parse_train_config(std::string_view text, const Overrides& flags) {
  const auto entries = collect(text, flags);
  Resolved<train::ScenarioConfig> res;
  res.provenance = all_default(train_fields());
  int scenario_id = 1;
  for (const auto& e : entries) {
    if (e.key == "scenario_id") {
      scenario_id = parse_number<int>(e.key, e.value);
      res.provenance[e.key] = e.source;
    }
  }
  res.config = train::ScenarioConfig::for_scenario(scenario_id);
  apply(res.config, res.provenance, train_fields(), entries, "scenario_id");
  res.config.world.predator_present = res.config.predator_in_training;
  res.config.validate();
  res.warnings = res.config.hyperparams.range_warnings();
  return res;
}

Resolved<EvalConfig> parse_eval_config(std::string_view text, const Overrides& flags) {
  const auto entries = collect(text, flags);
  Resolved<EvalConfig> res;
  res.provenance = all_default(eval_fields());
  apply(res.config, res.provenance, eval_fields(), entries, {});
  res.config.world.validate();
  if (res.config.n_runs <= 0) throw ConfigError("n_runs must be positive");
  if (res.config.duration <= 0) throw ConfigError("duration must be positive");
  return res;
}

Resolved<train::ScenarioConfig> load_train_config(const std::optional<std::filesystem::path>& path,
                                                  const Overrides& flags) {
  return parse_train_config(path ? read_file(*path) : std::string(), flags);
}

Resolved<EvalConfig> load_eval_config(const std::optional<std::filesystem::path>& path, const Overrides& flags) {
  return parse_eval_config(path ? read_file(*path) : std::string(), flags);
}

void write_resolved(std::ostream& out, const train::ScenarioConfig& cfg, const Provenance* provenance) {
  write_fields(out, cfg, train_fields(), provenance);
}

void write_resolved(std::ostream& out, const EvalConfig& cfg, const Provenance* provenance) {
  write_fields(out, cfg, eval_fields(), provenance);
}

}  // namespace predprey::io
