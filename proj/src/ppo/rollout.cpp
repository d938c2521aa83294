#include "predprey/ppo/rollout.hpp"

#include "predprey/errors.hpp"
#include "predprey/ppo/gae.hpp"

namespace predprey::ppo {

void RolloutBuffer::clear() {
  observations_.clear();
  actions_.clear();
  log_prob_old_.clear();
  rewards_.clear();
  values_.clear();
  episode_end_.clear();
  advantages_.clear();
  returns_.clear();
}

void RolloutBuffer::add(std::span<const double> obs, int action, double log_prob_old,
                        double reward, double value, bool episode_end, double advantage,
                        double return_target) {
  if (static_cast<int>(obs.size()) != obs_dim_) {
    throw StructuralError("RolloutBuffer: observation size mismatch");
  }
  observations_.insert(observations_.end(), obs.begin(), obs.end());
  actions_.push_back(action);
  log_prob_old_.push_back(log_prob_old);
  rewards_.push_back(reward);
  values_.push_back(value);
  episode_end_.push_back(episode_end ? 1 : 0);
  advantages_.push_back(advantage);
  returns_.push_back(return_target);
}

void RolloutBuffer::add_segment(const Segment& seg, double bootstrap_value, double gamma,
                                double lambda) {
  const std::size_t n = seg.size();
  if (seg.observations.size() != n * static_cast<std::size_t>(obs_dim_) ||
      seg.log_probs.size() != n || seg.rewards.size() != n || seg.values.size() != n ||
      seg.episode_end.size() != n) {
    throw StructuralError("RolloutBuffer: segment fields differ in length");
  }
  const auto est = compute_gae(seg.rewards, seg.values, seg.episode_end, bootstrap_value, gamma, lambda);
  const auto dim = static_cast<std::size_t>(obs_dim_);
  for (std::size_t t = 0; t < n; ++t) {
    add({seg.observations.data() + t * dim, dim}, seg.actions[t], seg.log_probs[t],
        seg.rewards[t], seg.values[t], seg.episode_end[t] != 0, est.advantages[t],
        est.returns[t]);
  }
}

void RolloutBuffer::save(ByteWriter& w) const {
  w.i64(obs_dim_);
  w.u64(actions_.size());
  w.f64s(observations_);
  for (int a : actions_) w.i64(a);
  w.f64s(log_prob_old_);
  w.f64s(rewards_);
  w.f64s(values_);
  for (auto e : episode_end_) w.u32(e);
  w.f64s(advantages_);
  w.f64s(returns_);
}

void RolloutBuffer::load(ByteReader& r) {
  RolloutBuffer b(static_cast<int>(r.i64()));
  const auto n = static_cast<std::size_t>(r.u64());
  if (b.obs_dim_ <= 0 || n > 100'000'000) throw IoError("saved rollout buffer is implausible");
  b.observations_ = r.f64s(n * static_cast<std::size_t>(b.obs_dim_));
  b.actions_.resize(n);
  for (auto& a : b.actions_) a = static_cast<int>(r.i64());
  b.log_prob_old_ = r.f64s(n);
  b.rewards_ = r.f64s(n);
  b.values_ = r.f64s(n);
  b.episode_end_.resize(n);
  for (auto& e : b.episode_end_) e = static_cast<std::uint8_t>(r.u32());
  b.advantages_ = r.f64s(n);
  b.returns_ = r.f64s(n);
  *this = std::move(b);
}

RolloutCollector::RolloutCollector(std::vector<env::World> worlds) : worlds_(std::move(worlds)) {
  if (worlds_.empty()) throw ConfigError("RolloutCollector needs at least one world");
  for (const auto& w : worlds_) {
    episode_return_.insert(episode_return_.end(), w.state().prey.size(), 0.0);
  }
}

CollectStats RolloutCollector::collect_rollout(const nn::DenseNet& net, int horizon,
                                               const PpoHyperparams& hp, ActionMode mode,
                                               std::mt19937_64& rng, RolloutBuffer& out) {
  if (horizon <= 0) throw InputError("collect_rollout: horizon must be positive");
  const int obs_dim = net.input_dim();
  if (out.obs_dim() != obs_dim) throw StructuralError("collect_rollout: buffer/network obs size differ");

  std::vector<Segment> segments(num_streams());
  std::vector<nn::RowMatrix> current(worlds_.size());
  auto observe = [&](std::size_t w) {
    const auto rows = worlds_[w].observe_all();
    nn::RowMatrix m(static_cast<Eigen::Index>(rows.size()), obs_dim);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (static_cast<int>(rows[i].size()) != obs_dim) {
        throw StructuralError("collect_rollout: world observation size differs from network input");
      }
      for (int j = 0; j < obs_dim; ++j) m(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
    }
    current[w] = std::move(m);
  };
  for (std::size_t w = 0; w < worlds_.size(); ++w) observe(w);

  CollectStats stats;
  for (int t = 0; t < horizon; ++t) {
    std::size_t stream = 0;
    for (std::size_t w = 0; w < worlds_.size(); ++w) {
      env::World& world = worlds_[w];
      const nn::BatchOutput pol = net.forward_batch(current[w]);
      const auto n_prey = static_cast<std::size_t>(current[w].rows());
      std::vector<int> actions(n_prey);
      std::vector<double> logps(n_prey);
      for (std::size_t i = 0; i < n_prey; ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        const Eigen::VectorXd logits = pol.logits.row(row).transpose();
        const std::span<const double> z(logits.data(), static_cast<std::size_t>(logits.size()));
        actions[i] = select_action(z, branches_, mode, rng);
        logps[i] = log_prob(z, branches_, actions[i]);
        stats.entropy_sum += entropy(z, branches_);
        stats.value_sum += pol.values(row);
      }
      const env::StepResult res = world.step(actions);
      const bool finished = world.state().tick >= world.config().episode_length;
      for (std::size_t i = 0; i < n_prey; ++i) {
        Segment& seg = segments[stream + i];
        const auto row = current[w].row(static_cast<Eigen::Index>(i));
        seg.observations.insert(seg.observations.end(), row.data(), row.data() + obs_dim);
        seg.actions.push_back(actions[i]);
        seg.log_probs.push_back(logps[i]);
        seg.rewards.push_back(res.rewards[i]);
        seg.values.push_back(pol.values(static_cast<Eigen::Index>(i)));
        seg.episode_end.push_back(finished ? 1 : 0);
        episode_return_[stream + i] += res.rewards[i];
        if (finished) {
          stats.finished_episode_rewards.push_back(episode_return_[stream + i]);
          episode_return_[stream + i] = 0.0;
        }
      }
      if (finished) world.reset_episode();
      observe(w);
      stream += n_prey;
      stats.steps += static_cast<std::int64_t>(n_prey);
    }
  }

  std::size_t stream = 0;
  for (std::size_t w = 0; w < worlds_.size(); ++w) {
    const nn::BatchOutput boot = net.forward_batch(current[w]);
    for (Eigen::Index i = 0; i < current[w].rows(); ++i) {
      out.add_segment(segments[stream], boot.values(i), hp.gamma, hp.lambda);
      ++stream;
    }
  }
  return stats;
}

void RolloutCollector::save_state(ByteWriter& w) const {
  w.u64(worlds_.size());
  for (const auto& world : worlds_) world.save_state(w);
  w.f64s(episode_return_);
}

void RolloutCollector::load_state(ByteReader& r) {
  if (r.u64() != worlds_.size()) throw IoError("saved collector has a different world count");
  for (auto& world : worlds_) world.load_state(r);
  episode_return_ = r.f64s(episode_return_.size());
}

}  // namespace predprey::ppo
