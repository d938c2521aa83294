#include "predprey/ppo/update.hpp"

#include "predprey/errors.hpp"
#include "predprey/ppo/gae.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace predprey::ppo {

double probability_ratio(const nn::DenseNet& net, const ActionBranches& branches,
                         std::span<const double> obs, int action, double log_prob_old) {
  const nn::NetOutput out = net.forward(obs);
  const std::span<const double> z(out.logits.data(), static_cast<std::size_t>(out.logits.size()));
  return std::exp(log_prob(z, branches, action) - log_prob_old);
}

double clipped_surrogate(double ratio, double advantage, double epsilon) {
  const double clipped = std::clamp(ratio, 1.0 - epsilon, 1.0 + epsilon);
  return std::min(ratio * advantage, clipped * advantage);
}

LossTerms ppo_loss(const nn::DenseNet& net, const ActionBranches& branches,
                   const RolloutBuffer& buffer, std::span<const std::size_t> indices,
                   std::span<const double> advantages, const PpoHyperparams& hp,
                   std::vector<double>* grad) {
  if (indices.empty()) throw InputError("ppo_loss: empty minibatch");
  if (advantages.size() != buffer.size()) throw StructuralError("ppo_loss: advantages misaligned");
  if (net.policy_dim() != branches.logit_count()) {
    throw StructuralError("ppo_loss: policy head does not match the action branches");
  }
  const auto batch = static_cast<Eigen::Index>(indices.size());
  const int dim = buffer.obs_dim();
  nn::RowMatrix obs(batch, dim);
  for (Eigen::Index b = 0; b < batch; ++b) {
    const auto row = buffer.observation(indices[static_cast<std::size_t>(b)]);
    std::copy(row.begin(), row.end(), obs.row(b).data());
  }

  nn::ForwardCache cache;
  const nn::BatchOutput out = net.forward_batch(obs, grad ? &cache : nullptr);
  nn::RowMatrix d_logits = nn::RowMatrix::Zero(batch, net.policy_dim());
  nn::Vector d_values = nn::Vector::Zero(batch);

  const double inv_b = 1.0 / static_cast<double>(batch);
  LossTerms terms;
  double surrogate_sum = 0.0;
  double value_sq_sum = 0.0;
  double entropy_sum = 0.0;
  const std::size_t n_logits = static_cast<std::size_t>(net.policy_dim());
  std::vector<double> logits(n_logits);
  std::vector<double> branch_entropy(branches.num_branches());

  for (Eigen::Index b = 0; b < batch; ++b) {
    const std::size_t i = indices[static_cast<std::size_t>(b)];
    for (std::size_t k = 0; k < n_logits; ++k) logits[k] = out.logits(b, static_cast<Eigen::Index>(k));
    const auto lp = log_softmax_branches(logits, branches);
    const auto choice = branches.decode(buffer.actions()[i]);

    double logp = 0.0;
    for (std::size_t br = 0; br < choice.size(); ++br) {
      logp += lp[static_cast<std::size_t>(branches.logit_offset(br) + choice[br])];
      double h = 0.0;
      const auto off = static_cast<std::size_t>(branches.logit_offset(br));
      for (int k = 0; k < branches.sizes()[br]; ++k) h -= std::exp(lp[off + k]) * lp[off + k];
      branch_entropy[br] = h;
      entropy_sum += h;
    }
    const double ratio = std::exp(logp - buffer.log_prob_old()[i]);
    const double adv = advantages[i];
    const double unclipped = ratio * adv;
    const double clipped = std::clamp(ratio, 1.0 - hp.epsilon, 1.0 + hp.epsilon) * adv;
    surrogate_sum += std::min(unclipped, clipped);
    const double err = buffer.returns()[i] - out.values(b);
    value_sq_sum += err * err;

    if (!grad) continue;
    // d(surrogate)/d(log pi): the unclipped branch carries r * A, the clipped one nothing.
    const double g_logp = unclipped <= clipped ? unclipped : 0.0;
    for (std::size_t br = 0; br < choice.size(); ++br) {
      const auto off = static_cast<std::size_t>(branches.logit_offset(br));
      for (int k = 0; k < branches.sizes()[br]; ++k) {
        const std::size_t j = off + static_cast<std::size_t>(k);
        const double p = std::exp(lp[j]);
        const double onehot = k == choice[br] ? 1.0 : 0.0;
        const double d_surr = g_logp * (onehot - p);
        const double d_ent = -p * (lp[j] + branch_entropy[br]);
        d_logits(b, static_cast<Eigen::Index>(j)) = inv_b * (-d_surr - hp.beta * d_ent);
      }
    }
    d_values(b) = inv_b * (-2.0 * hp.value_loss_coeff * err);
  }

  terms.policy_loss = -surrogate_sum * inv_b;
  terms.value_loss = value_sq_sum * inv_b;
  terms.entropy = entropy_sum * inv_b;
  terms.total = terms.policy_loss + hp.value_loss_coeff * terms.value_loss - hp.beta * terms.entropy;
  if (grad) *grad = net.backward(cache, d_logits, d_values);
  return terms;
}

UpdateStats ppo_update(nn::DenseNet& net, nn::AdamState& adam, RolloutBuffer& buffer,
                       const ActionBranches& branches, const PpoHyperparams& hp,
                       double learning_rate, std::mt19937_64& rng) {
  if (buffer.size() < static_cast<std::size_t>(hp.buffer_size)) {
    throw ContractViolation("ppo_update: buffer holds " + std::to_string(buffer.size()) +
                            " transitions, needs " + std::to_string(hp.buffer_size));
  }
  const std::vector<double> advantages =
      hp.normalize_advantages ? normalize(buffer.advantages()) : buffer.advantages();

  const nn::DenseNet net_before = net;
  const nn::AdamState adam_before = adam;
  auto abort = [&](const std::string& why) {
    net = net_before;
    adam = adam_before;
    throw NumericError("ppo_update aborted: " + why + "; parameters left unchanged");
  };

  std::vector<std::size_t> order(buffer.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t m = static_cast<std::size_t>(hp.batch_size);
  const std::size_t batches = buffer.size() / m;

  UpdateStats stats;
  std::vector<double> grad;
  for (int epoch = 0; epoch < hp.num_epoch; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t k = 0; k < batches; ++k) {
      const std::span<const std::size_t> idx(order.data() + k * m, m);
      const LossTerms terms = ppo_loss(net, branches, buffer, idx, advantages, hp, &grad);
      if (!std::isfinite(terms.total)) abort("non-finite loss");
      try {
        nn::adam_step(net, adam, grad, learning_rate);
      } catch (const NumericError& e) {
        abort(e.what());
      }
      stats.policy_loss += std::abs(terms.policy_loss);
      stats.value_loss += terms.value_loss;
      stats.entropy += terms.entropy;
      ++stats.minibatch_steps;
    }
  }
  if (!net.all_finite()) abort("non-finite parameters after update");
  if (stats.minibatch_steps > 0) {
    const double n = stats.minibatch_steps;
    stats.policy_loss /= n;
    stats.value_loss /= n;
    stats.entropy /= n;
  }
  buffer.clear();
  return stats;
}

}  // namespace predprey::ppo
