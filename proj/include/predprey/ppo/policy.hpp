#pragma once

#include "predprey/env/actions.hpp"

#include <random>
#include <span>
#include <vector>

namespace predprey::ppo {

using env::ActionBranches;

/// Independent categorical distribution per action branch, parameterised by
/// the concatenated branch logits.

/// Per-logit log-probabilities (log-softmax applied branch by branch).
std::vector<double> log_softmax_branches(std::span<const double> logits,
                                         const ActionBranches& branches);

/// log pi(joint_action) = sum over branches of the chosen log-probability.
double log_prob(std::span<const double> logits, const ActionBranches& branches, int joint_action);

/// Sum of branch entropies; lies in [0, ln(joint_size)].
double entropy(std::span<const double> logits, const ActionBranches& branches);

/// Probability of each joint action (product over branches).
std::vector<double> joint_probabilities(std::span<const double> logits,
                                        const ActionBranches& branches);

enum class ActionMode { Sample, Greedy };

/// Draws one joint action. Greedy takes each branch's argmax (lowest index on
/// ties) and consumes no randomness.
int select_action(std::span<const double> logits, const ActionBranches& branches,
                  ActionMode mode, std::mt19937_64& rng);

}  // namespace predprey::ppo
