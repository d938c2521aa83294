#include "predprey/stats/evaluate.hpp"

#include "predprey/env/actions.hpp"
#include "predprey/env/world.hpp"
#include "predprey/errors.hpp"

#include <Eigen/Dense>

#include <random>
#include <string>

namespace predprey::stats {

namespace {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t run, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(run), static_cast<std::uint32_t>(stream)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace

EvalResult evaluate_condition(const nn::DenseNet& net, const env::WorldConfig& world,
                              const EvalOptions& options) {
  world.validate();
  const auto sizes = net.layer_sizes();
  if (sizes.front() != world.observation_size()) {
    throw StructuralError("checkpoint expects " + std::to_string(sizes.front()) +
                          " observation values but the world produces " +
                          std::to_string(world.observation_size()));
  }
  const env::ActionBranches branches = env::prey_action_space();
  if (sizes[sizes.size() - 2] != branches.logit_count()) {
    throw StructuralError("checkpoint policy head does not match the prey action space");
  }
  if (options.n_runs < 0 || options.duration < 0) throw InputError("n_runs and duration must be >= 0");

  EvalResult result;
  const auto obs_dim = static_cast<Eigen::Index>(world.observation_size());
  for (int run = 0; run < options.n_runs; ++run) {
    env::World w(world, derive_seed(options.base_seed, static_cast<std::uint64_t>(run), 0));
    std::mt19937_64 policy_rng(derive_seed(options.base_seed, static_cast<std::uint64_t>(run), 1));
    RunRecord rec;
    rec.run_id = run;
    rec.duration_steps = options.duration;
    double reward_sum = 0.0;

    auto obs = w.observe_all();
    nn::RowMatrix batch(static_cast<Eigen::Index>(obs.size()), obs_dim);
    std::vector<int> actions(obs.size());
    if (options.record_trajectories) env::append_frame(w, run, result.trajectories);
    for (std::int64_t t = 0; t < options.duration; ++t) {
      for (std::size_t i = 0; i < obs.size(); ++i) {
        for (Eigen::Index j = 0; j < obs_dim; ++j) batch(static_cast<Eigen::Index>(i), j) = obs[i][static_cast<std::size_t>(j)];
      }
      const auto out = net.forward_batch(batch, nullptr);
      for (std::size_t i = 0; i < obs.size(); ++i) {
        const auto row = out.logits.row(static_cast<Eigen::Index>(i));
        std::vector<double> logits(row.data(), row.data() + row.size());
        actions[i] = ppo::select_action(logits, branches, options.mode, policy_rng);
      }
      auto step = w.step(actions);
      for (double r : step.rewards) reward_sum += r;
      for (const auto& ev : step.events) {
        switch (ev.kind) {
          case env::EventKind::PositiveCollected: rec.pos_total += 1.0; break;
          case env::EventKind::NegativeCollected: rec.neg_total += 1.0; break;
          case env::EventKind::PreyCaught: rec.caught_total += 1.0; break;
        }
      }
      if (options.record_trajectories) env::append_frame(w, run, result.trajectories);
      if (w.state().tick >= world.episode_length) {
        w.reset_episode();
        obs = w.observe_all();
      } else {
        obs = std::move(step.observations);
      }
    }
    result.runs.push_back(rec);
    result.reward_sums.push_back(reward_sum);
  }
  return result;
}

}  // namespace predprey::stats
