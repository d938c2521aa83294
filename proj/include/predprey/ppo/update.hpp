#pragma once

#include "predprey/nn/adam.hpp"
#include "predprey/nn/dense_net.hpp"
#include "predprey/ppo/hyperparams.hpp"
#include "predprey/ppo/policy.hpp"
#include "predprey/ppo/rollout.hpp"

#include <cstddef>
#include <random>
#include <span>
#include <vector>

namespace predprey::ppo {

/// r_t(theta) = exp(log pi_theta(a|s) - log pi_theta_old(a|s)).
double probability_ratio(const nn::DenseNet& net, const ActionBranches& branches,
                         std::span<const double> obs, int action, double log_prob_old);

/// min(r * A, clip(r, 1 - eps, 1 + eps) * A).
double clipped_surrogate(double ratio, double advantage, double epsilon);

struct LossTerms {
  double total = 0.0;
  double policy_loss = 0.0;  // -mean clipped surrogate
  double value_loss = 0.0;   // mean (return - V)^2
  double entropy = 0.0;      // mean analytic entropy
};

/// PPO loss over the transitions `indices` of `buffer`:
///   -mean surrogate + value_loss_coeff * mean (return - V)^2 - beta * mean entropy.
/// `advantages` is indexed like the buffer. When `grad` is non-null it
/// receives dLoss/dtheta in the network's flat parameter layout.
LossTerms ppo_loss(const nn::DenseNet& net, const ActionBranches& branches,
                   const RolloutBuffer& buffer, std::span<const std::size_t> indices,
                   std::span<const double> advantages, const PpoHyperparams& hp,
                   std::vector<double>* grad);

struct UpdateStats {
  double policy_loss = 0.0;  // mean |policy loss| over minibatches
  double value_loss = 0.0;
  double entropy = 0.0;
  int minibatch_steps = 0;
};

/// K epochs of shuffled minibatch Adam steps over the whole buffer (trailing
/// transitions that do not fill a minibatch are skipped each epoch), then
/// clears the buffer. On a non-finite loss or gradient the network and
/// optimiser are restored and NumericError is thrown.
UpdateStats ppo_update(nn::DenseNet& net, nn::AdamState& adam, RolloutBuffer& buffer,
                       const ActionBranches& branches, const PpoHyperparams& hp,
                       double learning_rate, std::mt19937_64& rng);

}  // namespace predprey::ppo
