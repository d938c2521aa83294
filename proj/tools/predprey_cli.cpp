// Command-line front end: train, eval, stats, heatmap, replay-export.
//
// Exit codes: 0 success, 2 configuration error, 3 numeric failure, 4 I/O failure.

#include "predprey/errors.hpp"
#include "predprey/format.hpp"
#include "predprey/io/artifacts.hpp"
#include "predprey/io/config_file.hpp"
#include "predprey/io/replay.hpp"
#include "predprey/nn/checkpoint.hpp"
#include "predprey/stats/evaluate.hpp"
#include "predprey/stats/kde.hpp"
#include "predprey/stats/reports.hpp"
#include "predprey/train/trainer.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace predprey;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

io::Overrides parse_sets(const std::vector<std::string>& sets) {
  io::Overrides out;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
    auto trim = [](std::string v) {
      v.erase(0, v.find_first_not_of(' '));
      v.erase(v.find_last_not_of(' ') + 1);
      return v;
    };
    out.emplace_back(trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
  }
  return out;
}

fs::path ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

std::string schema(const char* name, int version) { return std::string(name) + "/" + std::to_string(version); }

struct TrainArgs {
  std::optional<fs::path> config;
  std::optional<int> scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> max_steps;
  std::optional<fs::path> out;
  std::optional<fs::path> resume;
  std::vector<std::string> sets;
};

int run_train(const TrainArgs& a) {
  auto flags = parse_sets(a.sets);
  if (a.scenario) flags.emplace_back("scenario_id", std::to_string(*a.scenario));
  if (a.seed) flags.emplace_back("seed", std::to_string(*a.seed));
  if (a.max_steps) flags.emplace_back("max_steps", std::to_string(*a.max_steps));
  const auto resolved = io::load_train_config(a.config, flags);
  for (const auto& w : resolved.warnings) std::cerr << "warning: " << w << '\n';
  const auto& cfg = resolved.config;

  const fs::path dir = ensure_dir(a.out ? *a.out
                                        : io::default_output_root() / ("train-scenario" + std::to_string(cfg.scenario_id) +
                                                                       "-seed" + std::to_string(cfg.seed)));
  std::ostringstream snapshot;
  io::write_resolved(snapshot, cfg, &resolved.provenance);
  io::write_text(dir / "config.resolved.txt", snapshot.str());
  io::write_manifest(dir, "train", cfg.seed,
                     {{"config.resolved.txt", "config/1"},
                      {"metrics.csv", schema("metrics", io::kMetricsSchema)},
                      {"final.ckpt", "checkpoint/" + std::to_string(nn::kCheckpointVersion)}});

  train::Trainer trainer = a.resume ? train::Trainer::resume(cfg, *a.resume) : train::Trainer(cfg);
  trainer.set_output_dir(dir);
  std::size_t printed = trainer.metrics().size();
  while (!trainer.finished()) {
    trainer.iterate();
    for (; printed < trainer.metrics().size(); ++printed) {
      const auto& m = trainer.metrics()[printed];
      std::cout << "step " << m.global_step << "  reward " << format_double(m.cumulative_reward_mean)
                << "  entropy " << format_double(m.entropy) << "  value_loss " << format_double(m.value_loss)
                << std::endl;
    }
  }
  trainer.run();  // already at max_steps: writes final checkpoint and metrics
  std::cout << "wrote " << (dir / "final.ckpt").string() << " and " << (dir / "metrics.csv").string() << '\n';
  return 0;
}

struct EvalArgs {
  std::optional<fs::path> config;
  std::optional<std::string> checkpoint;
  std::optional<std::string> condition;
  std::optional<bool> predator;
  std::optional<std::uint64_t> seed;
  std::optional<int> n_runs;
  std::optional<std::int64_t> duration;
  bool greedy = false;
  bool trajectories = false;
  std::optional<fs::path> out;
  std::vector<std::string> sets;
};

int run_eval(const EvalArgs& a) {
  auto flags = parse_sets(a.sets);
  if (a.checkpoint) flags.emplace_back("checkpoint", *a.checkpoint);
  if (a.condition) flags.emplace_back("condition_id", *a.condition);
  if (a.predator) flags.emplace_back("predator_present", *a.predator ? "true" : "false");
  if (a.seed) flags.emplace_back("seed", std::to_string(*a.seed));
  if (a.n_runs) flags.emplace_back("n_runs", std::to_string(*a.n_runs));
  if (a.duration) flags.emplace_back("duration", std::to_string(*a.duration));
  if (a.greedy) flags.emplace_back("greedy", "true");
  if (a.trajectories) flags.emplace_back("record_trajectories", "true");
  const auto resolved = io::load_eval_config(a.config, flags);
  const auto& cfg = resolved.config;
  if (cfg.checkpoint.empty()) throw ConfigError("eval needs a checkpoint (--checkpoint or 'checkpoint = ...')");

  const auto ckpt = nn::load_checkpoint(cfg.checkpoint);
  stats::EvalOptions opts;
  opts.n_runs = cfg.n_runs;
  opts.duration = cfg.duration;
  opts.mode = cfg.greedy ? ppo::ActionMode::Greedy : ppo::ActionMode::Sample;
  opts.base_seed = cfg.seed;
  opts.record_trajectories = cfg.record_trajectories;
  const auto result = stats::evaluate_condition(ckpt.net, cfg.world, opts);

  const fs::path dir = ensure_dir(a.out ? *a.out
                                        : io::default_output_root() /
                                              ("eval-" + cfg.condition_id + "-seed" + std::to_string(cfg.seed)));
  std::ostringstream snapshot;
  io::write_resolved(snapshot, cfg, &resolved.provenance);
  io::write_text(dir / "config.resolved.txt", snapshot.str());
  std::vector<io::ManifestEntry> outputs{{"config.resolved.txt", "config/1"},
                                         {"runs.csv", schema("runs", io::kRunsSchema)},
                                         {"summary.csv", schema("summary", io::kSummarySchema)}};
  stats::write_runs_csv(dir / "runs.csv", {{cfg.condition_id, result.runs}});
  stats::write_summary_csv(dir / "summary.csv", {stats::summarize(cfg.condition_id, result.runs)});
  if (cfg.record_trajectories) {
    std::ofstream traj(dir / "trajectories.csv");
    if (!traj) throw IoError("cannot write " + (dir / "trajectories.csv").string());
    env::write_trajectory_header(traj);
    env::write_trajectory_rows(traj, result.trajectories);
    if (!traj) throw IoError("write failed: " + (dir / "trajectories.csv").string());
    outputs.push_back({"trajectories.csv", schema("trajectory", io::kTrajectorySchema)});
  }
  io::write_manifest(dir, "eval", cfg.seed, outputs);

  const auto s = stats::summarize(cfg.condition_id, result.runs);
  std::cout << cfg.condition_id << ": " << s.n_runs << " runs, efficiency " << format_double(s.efficiency.mean)
            << " (" << format_double(s.efficiency.std) << "), positive " << format_double(s.positive.mean)
            << ", negative " << format_double(s.negative.mean) << ", caught " << format_double(s.caught.mean)
            << '\n';
  return 0;
}

struct StatsArgs {
  std::vector<fs::path> runs;
  std::optional<fs::path> out;
};

int run_stats(const StatsArgs& a) {
  std::vector<stats::ConditionRuns> conditions;
  for (const auto& p : a.runs) {
    for (auto& c : stats::read_runs_csv(p)) {
      const bool dup = std::any_of(conditions.begin(), conditions.end(),
                                   [&](const stats::ConditionRuns& o) { return o.condition_id == c.condition_id; });
      if (dup) throw ConfigError("condition '" + c.condition_id + "' appears in more than one runs file");
      conditions.push_back(std::move(c));
    }
  }
  if (conditions.size() < 2) throw ConfigError("stats needs at least two conditions");

  std::vector<stats::ConditionSummary> summaries;
  for (const auto& c : conditions) summaries.push_back(stats::summarize(c.condition_id, c.runs));
  std::vector<stats::PairwiseStat> pairs;
  for (std::size_t i = 0; i < conditions.size(); ++i) {
    for (std::size_t j = i + 1; j < conditions.size(); ++j) {
      auto rows = stats::compare_conditions(conditions[i], conditions[j]);
      pairs.insert(pairs.end(), rows.begin(), rows.end());
    }
  }
  const fs::path dir = ensure_dir(a.out ? *a.out : io::default_output_root() / "stats");
  std::string snapshot;
  for (const auto& p : a.runs) snapshot += "runs = " + p.string() + "\n";
  io::write_text(dir / "config.resolved.txt", snapshot);
  stats::write_summary_csv(dir / "summary.csv", summaries);
  stats::write_stats_csv(dir / "stats.csv", pairs);
  io::write_manifest(dir, "stats", 0,
                     {{"config.resolved.txt", "config/1"},
                      {"summary.csv", schema("summary", io::kSummarySchema)},
                      {"stats.csv", schema("stats", io::kStatsSchema)}});
  for (const auto& p : pairs) {
    std::cout << p.variable << ' ' << p.condition_a << " vs " << p.condition_b << ": F "
              << format_double(p.anova.f_score) << ", p " << format_double(p.anova.p_value) << ", d "
              << (p.cohens_d ? format_double(*p.cohens_d) : "undefined") << '\n';
  }
  return 0;
}

struct HeatmapArgs {
  fs::path trajectories;
  std::string entity = "prey";
  std::optional<double> bandwidth;
  int width = 64;
  int height = 64;
  std::optional<double> arena_side;
  std::optional<fs::path> out;
};

int run_heatmap(const HeatmapArgs& a) {
  const auto rows = env::read_trajectory_csv(a.trajectories);
  const auto samples = stats::positions_of(rows, a.entity);
  env::WorldConfig world;
  if (a.arena_side) world.arena_side = *a.arena_side;
  const auto grid = stats::kde_occupancy(samples, a.entity, a.bandwidth, a.width, a.height, world.arena());

  const fs::path dir = ensure_dir(a.out ? *a.out : io::default_output_root() / ("heatmap-" + a.entity));
  std::string snapshot = "trajectories = " + a.trajectories.string() + "\nentity = " + a.entity +
                         "\nbandwidth = " + format_double(grid.bandwidth) + "\nwidth = " + std::to_string(a.width) +
                         "\nheight = " + std::to_string(a.height) + "\narena_side = " +
                         format_double(world.arena_side) + "\n";
  io::write_text(dir / "config.resolved.txt", snapshot);
  stats::write_grid_text(dir / (a.entity + ".grid.txt"), grid);
  stats::write_grid_pgm(dir / (a.entity + ".pgm"), grid);
  io::write_manifest(dir, "heatmap", 0,
                     {{"config.resolved.txt", "config/1"},
                      {a.entity + ".grid.txt", schema("grid", io::kGridSchema)},
                      {a.entity + ".pgm", "pgm/1"}});
  std::cout << samples.size() << " samples, bandwidth " << format_double(grid.bandwidth) << '\n';
  return 0;
}

struct ReplayArgs {
  fs::path trajectories;
  std::int64_t run = 0;
  std::int64_t from = 0;
  std::int64_t to = 0;
  std::optional<fs::path> out;
};

int run_replay(const ReplayArgs& a) {
  const auto rows = env::read_trajectory_csv(a.trajectories);
  const auto text = io::replay_export(rows, a.run, a.from, a.to);
  if (a.out) {
    io::write_text(*a.out, text);
  } else {
    std::cout << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Predator-prey PPO simulator"};
  app.require_subcommand(1);

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "Train prey agents with PPO");
  train->add_option("--config", train_args.config, "key = value config file");
  train->add_option("--scenario", train_args.scenario, "Scenario preset 1, 2 or 3");
  train->add_option("--seed", train_args.seed, "Run seed");
  train->add_option("--max-steps", train_args.max_steps, "Override max_steps");
  train->add_option("--out", train_args.out, "Output directory");
  train->add_option("--resume", train_args.resume, "Continue from a checkpoint");
  train->add_option("--set", train_args.sets, "Extra key=value overrides")->take_all();

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint under one condition");
  eval->add_option("--config", eval_args.config, "key = value config file");
  eval->add_option("--checkpoint", eval_args.checkpoint, "Trained checkpoint");
  eval->add_option("--condition", eval_args.condition, "Condition label");
  eval->add_option("--predator", eval_args.predator, "Predator present at test time (true/false)");
  eval->add_option("--seed", eval_args.seed, "Base seed");
  eval->add_option("--n-runs", eval_args.n_runs, "Number of runs");
  eval->add_option("--duration", eval_args.duration, "Ticks per run");
  eval->add_flag("--greedy", eval_args.greedy, "Argmax actions instead of sampling");
  eval->add_flag("--trajectories", eval_args.trajectories, "Write trajectories.csv");
  eval->add_option("--out", eval_args.out, "Output directory");
  eval->add_option("--set", eval_args.sets, "Extra key=value overrides")->take_all();

  StatsArgs stats_args;
  auto* st = app.add_subcommand("stats", "Summaries, ANOVA and Cohen's d across conditions");
  st->add_option("--runs", stats_args.runs, "runs.csv files from eval")->required()->take_all();
  st->add_option("--out", stats_args.out, "Output directory");

  HeatmapArgs heat_args;
  auto* heat = app.add_subcommand("heatmap", "KDE occupancy grid from a trajectory log");
  heat->add_option("--trajectories", heat_args.trajectories, "trajectories.csv from eval")->required();
  heat->add_option("--entity", heat_args.entity, "prey or predator")->check(CLI::IsMember({"prey", "predator"}));
  heat->add_option("--bandwidth", heat_args.bandwidth, "Kernel bandwidth (default: Scott's rule)");
  heat->add_option("--width", heat_args.width, "Grid columns");
  heat->add_option("--height", heat_args.height, "Grid rows");
  heat->add_option("--arena-side", heat_args.arena_side, "Arena side length for the grid extent");
  heat->add_option("--out", heat_args.out, "Output directory");

  ReplayArgs replay_args;
  auto* replay = app.add_subcommand("replay-export", "Dump per-tick frames from a trajectory log");
  replay->add_option("--trajectories", replay_args.trajectories, "trajectories.csv from eval")->required();
  replay->add_option("--run", replay_args.run, "Run id");
  replay->add_option("--from", replay_args.from, "First tick")->required();
  replay->add_option("--to", replay_args.to, "Last tick")->required();
  replay->add_option("--out", replay_args.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*train) return run_train(train_args);
    if (*eval) return run_eval(eval_args);
    if (*st) return run_stats(stats_args);
    if (*heat) return run_heatmap(heat_args);
    if (*replay) return run_replay(replay_args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const StructuralError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InputError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
