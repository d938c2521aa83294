#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace predprey::ppo {

struct AdvantageEstimates {
  std::vector<double> advantages;
  std::vector<double> returns;  // value targets: advantage + V(s_t)
};

/// Generalised advantage estimation over one agent's segment.
///
/// delta_t = r_t + gamma * V(s_{t+1}) * (1 - done_t) - V(s_t), with
/// V(s_T) = bootstrap_value, and A_t = delta_t + gamma * lambda * (1 - done_t) * A_{t+1}.
/// `episode_end[t]` (nonzero) marks that the episode terminated after transition t.
AdvantageEstimates compute_gae(std::span<const double> rewards, std::span<const double> values,
                               std::span<const std::uint8_t> episode_end, double bootstrap_value,
                               double gamma, double lambda);

/// (x - mean) / (std + 1e-8), population std.
std::vector<double> normalize(std::span<const double> xs);

}  // namespace predprey::ppo
