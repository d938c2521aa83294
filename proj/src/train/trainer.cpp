#include "predprey/train/trainer.hpp"

#include "predprey/binary.hpp"
#include "predprey/errors.hpp"
#include "predprey/format.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace predprey::train {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::string_view kStateTag = "TRAINST1";

std::uint64_t derive_seed(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

std::vector<env::World> make_worlds(const ScenarioConfig& cfg) {
  std::vector<env::World> worlds;
  for (int w = 0; w < cfg.num_actors; ++w) {
    worlds.emplace_back(cfg.training_world(), derive_seed(cfg.seed, 100 + static_cast<std::uint32_t>(w)));
  }
  return worlds;
}

const ScenarioConfig& validated(const ScenarioConfig& cfg) {
  cfg.validate();
  return cfg;
}

}  // namespace

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  out << kMetricsHeader << '\n';
  for (const auto& r : rows) {
    out << r.global_step << ',' << format_double(r.cumulative_reward_mean) << ','
        << format_double(r.policy_loss) << ',' << format_double(r.value_loss) << ','
        << format_double(r.entropy) << ',' << format_double(r.value_estimate_mean) << '\n';
  }
}

void write_metrics_csv(const std::filesystem::path& path, const std::vector<MetricsRow>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write metrics to " + path.string());
  write_metrics_csv(out, rows);
  if (!out) throw IoError("write failed: " + path.string());
}

Trainer::Trainer(ScenarioConfig cfg)
    : cfg_(validated(cfg)),
      net_(nn::DenseNet::initialized(cfg_.training_world().observation_size(), cfg_.hidden_layers(),
                                     branches_.logit_count(), derive_seed(cfg_.seed, 0))),
      adam_(nn::AdamState::for_net(net_)),
      schedule_{cfg_.hyperparams.learning_rate, cfg_.max_steps()},
      collector_(make_worlds(cfg_)),
      buffer_(net_.input_dim()),
      rng_(derive_seed(cfg_.seed, 1)),
      next_summary_(cfg_.hyperparams.summary_freq),
      next_checkpoint_(cfg_.checkpoint_interval) {}

Trainer Trainer::resume(ScenarioConfig cfg, const std::filesystem::path& checkpoint) {
  nn::Checkpoint ck = nn::load_checkpoint(checkpoint);
  Trainer t(std::move(cfg));
  if (ck.net.layer_sizes() != t.net_.layer_sizes()) {
    throw StructuralError("checkpoint network shape does not match the training config");
  }
  if (ck.seed != t.cfg_.seed) throw ConfigError("checkpoint was trained with a different seed");
  if (ck.trainer_state.empty()) throw IoError("checkpoint carries no training state");
  t.net_ = std::move(ck.net);
  t.adam_ = std::move(ck.adam);
  t.global_step_ = static_cast<std::int64_t>(ck.global_step);
  t.decode_state(ck.trainer_state);
  return t;
}

void Trainer::iterate() {
  const auto& hp = cfg_.hyperparams;
  const ppo::CollectStats stats =
      collector_.collect_rollout(net_, hp.time_horizon, hp, ppo::ActionMode::Sample, rng_, buffer_);
  global_step_ += stats.steps;

  window_.entropy_sum += stats.entropy_sum;
  window_.value_sum += stats.value_sum;
  window_.decisions += stats.steps;
  const auto per_world = static_cast<std::size_t>(cfg_.world.n_prey);
  for (std::size_t i = 0; i + per_world <= stats.finished_episode_rewards.size(); i += per_world) {
    double sum = 0.0;
    for (std::size_t k = 0; k < per_world; ++k) sum += stats.finished_episode_rewards[i + k];
    episodes_.push_back({global_step_, sum / static_cast<double>(per_world)});
    window_.episode_reward_sum += sum;
    window_.episodes += static_cast<std::int64_t>(per_world);
  }

  if (buffer_.size() >= static_cast<std::size_t>(hp.buffer_size)) {
    const double lr = schedule_.rate_at(global_step_);
    const ppo::UpdateStats upd = ppo::ppo_update(net_, adam_, buffer_, branches_, hp, lr, rng_);
    ++updates_;
    window_.policy_loss_sum += upd.policy_loss;
    window_.value_loss_sum += upd.value_loss;
    window_.updates += 1;
    last_update_ = upd;
  }
  emit_rows();
  maybe_checkpoint();
}

void Trainer::emit_rows() {
  while (global_step_ >= next_summary_) {
    const Window& w = window_;
    auto mean = [](double sum, std::int64_t n) { return n > 0 ? sum / static_cast<double>(n) : kNaN; };
    MetricsRow row;
    row.global_step = next_summary_;
    row.cumulative_reward_mean = mean(w.episode_reward_sum, w.episodes);
    row.extrinsic_reward_mean = row.cumulative_reward_mean;
    row.policy_loss = mean(w.policy_loss_sum, w.updates);
    row.value_loss = mean(w.value_loss_sum, w.updates);
    row.entropy = mean(w.entropy_sum, w.decisions);
    row.value_estimate_mean = mean(w.value_sum, w.decisions);
    metrics_.push_back(row);
    window_ = Window{};
    next_summary_ += cfg_.hyperparams.summary_freq;
  }
}

void Trainer::maybe_checkpoint() {
  while (global_step_ >= next_checkpoint_) {
    if (output_dir_) {
      save(*output_dir_ / ("checkpoint-" + std::to_string(next_checkpoint_) + ".ckpt"));
    }
    next_checkpoint_ += cfg_.checkpoint_interval;
  }
}

void Trainer::run_until(std::int64_t step) {
  const std::int64_t stop = std::min(step, cfg_.max_steps());
  while (global_step_ < stop) iterate();
}

void Trainer::run() {
  run_until(cfg_.max_steps());
  if (output_dir_) {
    save(*output_dir_ / "final.ckpt");
    write_metrics_csv(*output_dir_ / "metrics.csv", metrics_);
  }
}

void Trainer::set_output_dir(std::filesystem::path dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  output_dir_ = std::move(dir);
}

nn::Checkpoint Trainer::checkpoint() const {
  return {net_, adam_, cfg_.seed, static_cast<std::uint64_t>(global_step_), encode_state()};
}

void Trainer::save(const std::filesystem::path& path) const { nn::save_checkpoint(path, checkpoint()); }

std::string Trainer::encode_state() const {
  ByteWriter w;
  w.bytes(kStateTag);
  w.i64(next_summary_);
  w.i64(next_checkpoint_);
  w.i64(updates_);
  w.f64(window_.episode_reward_sum);
  w.i64(window_.episodes);
  w.f64(window_.entropy_sum);
  w.f64(window_.value_sum);
  w.i64(window_.decisions);
  w.f64(window_.policy_loss_sum);
  w.f64(window_.value_loss_sum);
  w.i64(window_.updates);
  w.u64(metrics_.size());
  for (const auto& m : metrics_) {
    w.i64(m.global_step);
    w.f64(m.cumulative_reward_mean);
    w.f64(m.policy_loss);
    w.f64(m.value_loss);
    w.f64(m.entropy);
    w.f64(m.extrinsic_reward_mean);
    w.f64(m.value_estimate_mean);
  }
  w.u64(episodes_.size());
  for (const auto& e : episodes_) {
    w.i64(e.global_step);
    w.f64(e.mean_reward);
  }
  w.u32(last_update_ ? 1 : 0);
  if (last_update_) {
    w.f64(last_update_->policy_loss);
    w.f64(last_update_->value_loss);
    w.f64(last_update_->entropy);
    w.i64(last_update_->minibatch_steps);
  }
  std::ostringstream rng;
  rng << rng_;
  w.str(rng.str());
  collector_.save_state(w);
  buffer_.save(w);
  return w.take();
}

void Trainer::decode_state(std::string_view bytes) {
  ByteReader r(bytes);
  if (r.bytes(kStateTag.size()) != kStateTag) throw IoError("unrecognised training state block");
  next_summary_ = r.i64();
  next_checkpoint_ = r.i64();
  updates_ = static_cast<int>(r.i64());
  window_.episode_reward_sum = r.f64();
  window_.episodes = r.i64();
  window_.entropy_sum = r.f64();
  window_.value_sum = r.f64();
  window_.decisions = r.i64();
  window_.policy_loss_sum = r.f64();
  window_.value_loss_sum = r.f64();
  window_.updates = r.i64();
  const auto n_rows = r.u64();
  if (n_rows > 10'000'000) throw IoError("training state: implausible metrics count");
  metrics_.clear();
  for (std::uint64_t i = 0; i < n_rows; ++i) {
    MetricsRow m;
    m.global_step = r.i64();
    m.cumulative_reward_mean = r.f64();
    m.policy_loss = r.f64();
    m.value_loss = r.f64();
    m.entropy = r.f64();
    m.extrinsic_reward_mean = r.f64();
    m.value_estimate_mean = r.f64();
    metrics_.push_back(m);
  }
  const auto n_eps = r.u64();
  if (n_eps > 100'000'000) throw IoError("training state: implausible episode count");
  episodes_.clear();
  for (std::uint64_t i = 0; i < n_eps; ++i) {
    EpisodeSummary e;
    e.global_step = r.i64();
    e.mean_reward = r.f64();
    episodes_.push_back(e);
  }
  last_update_.reset();
  if (r.u32() == 1) {
    ppo::UpdateStats u;
    u.policy_loss = r.f64();
    u.value_loss = r.f64();
    u.entropy = r.f64();
    u.minibatch_steps = static_cast<int>(r.i64());
    last_update_ = u;
  }
  std::istringstream rng(r.str());
  rng >> rng_;
  if (!rng) throw IoError("training state: bad generator state");
  collector_.load_state(r);
  buffer_.load(r);
  if (r.remaining() != 0) throw IoError("training state has trailing bytes");
}

}  // namespace predprey::train
