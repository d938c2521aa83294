#include "predprey/ppo/policy.hpp"

#include "predprey/errors.hpp"

#include <algorithm>
#include <cmath>

namespace predprey::ppo {

std::vector<double> log_softmax_branches(std::span<const double> logits,
                                         const ActionBranches& branches) {
  if (static_cast<int>(logits.size()) != branches.logit_count()) {
    throw StructuralError("policy logits do not match the action branches");
  }
  std::vector<double> out(logits.size());
  for (std::size_t b = 0; b < branches.num_branches(); ++b) {
    const auto off = static_cast<std::size_t>(branches.logit_offset(b));
    const auto n = static_cast<std::size_t>(branches.sizes()[b]);
    const auto seg = logits.subspan(off, n);
    const double mx = *std::max_element(seg.begin(), seg.end());
    double sum = 0.0;
    for (double z : seg) sum += std::exp(z - mx);
    const double lse = mx + std::log(sum);
    for (std::size_t k = 0; k < n; ++k) out[off + k] = seg[k] - lse;
  }
  return out;
}

double log_prob(std::span<const double> logits, const ActionBranches& branches, int joint_action) {
  const auto lp = log_softmax_branches(logits, branches);
  const auto choice = branches.decode(joint_action);
  double total = 0.0;
  for (std::size_t b = 0; b < choice.size(); ++b) {
    total += lp[static_cast<std::size_t>(branches.logit_offset(b) + choice[b])];
  }
  return total;
}

double entropy(std::span<const double> logits, const ActionBranches& branches) {
  const auto lp = log_softmax_branches(logits, branches);
  double h = 0.0;
  for (double l : lp) h -= std::exp(l) * l;
  return h;
}

std::vector<double> joint_probabilities(std::span<const double> logits,
                                        const ActionBranches& branches) {
  const auto lp = log_softmax_branches(logits, branches);
  std::vector<double> out(static_cast<std::size_t>(branches.joint_size()));
  for (int a = 0; a < branches.joint_size(); ++a) {
    const auto choice = branches.decode(a);
    double l = 0.0;
    for (std::size_t b = 0; b < choice.size(); ++b) {
      l += lp[static_cast<std::size_t>(branches.logit_offset(b) + choice[b])];
    }
    out[static_cast<std::size_t>(a)] = std::exp(l);
  }
  return out;
}

int select_action(std::span<const double> logits, const ActionBranches& branches,
                  ActionMode mode, std::mt19937_64& rng) {
  const auto lp = log_softmax_branches(logits, branches);
  std::vector<int> choice(branches.num_branches());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t b = 0; b < branches.num_branches(); ++b) {
    const auto off = static_cast<std::size_t>(branches.logit_offset(b));
    const int n = branches.sizes()[b];
    if (mode == ActionMode::Greedy) {
      int best = 0;
      for (int k = 1; k < n; ++k) {
        if (lp[off + k] > lp[off + best]) best = k;
      }
      choice[b] = best;
      continue;
    }
    const double u = unit(rng);
    double cdf = 0.0;
    choice[b] = n - 1;
    for (int k = 0; k < n; ++k) {
      cdf += std::exp(lp[off + k]);
      if (u < cdf) {
        choice[b] = k;
        break;
      }
    }
  }
  return branches.encode(choice);
}

}  // namespace predprey::ppo
