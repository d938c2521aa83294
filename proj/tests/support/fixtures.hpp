#pragma once

#include "predprey/env/actions.hpp"
#include "predprey/nn/dense_net.hpp"
#include "predprey/ppo/policy.hpp"
#include "predprey/ppo/rollout.hpp"

#include <random>
#include <vector>

namespace fixture {

// Network with every parameter drawn from N(0, scale^2); large enough weights
// that gradients are far from zero.
inline predprey::nn::DenseNet random_net(std::uint64_t seed, int in, std::vector<int> hidden, int out,
                                         double scale = 0.5) {
  predprey::nn::DenseNet net(in, std::move(hidden), out);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, scale);
  for (double& p : net.parameters()) p = n(rng);
  return net;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

// Frozen PPO buffer for the prey action space whose probability ratios under
// `net` are drawn from `ratios`, so the test controls which transitions clip.
inline predprey::ppo::RolloutBuffer frozen_buffer(const predprey::nn::DenseNet& net, std::size_t n,
                                                  const std::vector<double>& ratios, std::uint64_t seed) {
  const auto branches = predprey::env::prey_action_space();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> action(0, branches.joint_size() - 1);
  std::normal_distribution<double> noise(0.0, 1.0);
  predprey::ppo::RolloutBuffer buf(net.input_dim());
  for (std::size_t i = 0; i < n; ++i) {
    const auto obs = random_vector(rng, static_cast<std::size_t>(net.input_dim()));
    const int a = action(rng);
    const auto out = net.forward(obs);
    const std::vector<double> z(out.logits.data(), out.logits.data() + out.logits.size());
    const double logp = predprey::ppo::log_prob(z, branches, a);
    const double r = ratios[i % ratios.size()];
    const double adv = noise(rng);
    buf.add(obs, a, logp - std::log(r), 0.0, out.value, false, adv, out.value + noise(rng));
  }
  return buf;
}

}  // namespace fixture
