#include "predprey/ppo/gae.hpp"

#include "predprey/errors.hpp"

#include <cmath>

namespace predprey::ppo {

AdvantageEstimates compute_gae(std::span<const double> rewards, std::span<const double> values,
                               std::span<const std::uint8_t> episode_end, double bootstrap_value,
                               double gamma, double lambda) {
  const std::size_t n = rewards.size();
  if (values.size() != n || episode_end.size() != n) {
    throw StructuralError("compute_gae: rewards, values and boundaries differ in length");
  }
  if (gamma < 0.0 || gamma > 1.0 || lambda < 0.0 || lambda > 1.0) {
    throw InputError("compute_gae: gamma and lambda must lie in [0, 1]");
  }
  AdvantageEstimates est;
  est.advantages.assign(n, 0.0);
  est.returns.assign(n, 0.0);
  double next_value = bootstrap_value;
  double next_adv = 0.0;
  for (std::size_t t = n; t-- > 0;) {
    const double live = episode_end[t] ? 0.0 : 1.0;
    const double delta = rewards[t] + gamma * next_value * live - values[t];
    next_adv = delta + gamma * lambda * live * next_adv;
    est.advantages[t] = next_adv;
    est.returns[t] = next_adv + values[t];
    next_value = values[t];
  }
  return est;
}

std::vector<double> normalize(std::span<const double> xs) {
  if (xs.empty()) return {};
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size());
  const double denom = std::sqrt(var) + 1e-8;
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back((x - mean) / denom);
  return out;
}

}  // namespace predprey::ppo
