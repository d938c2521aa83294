#pragma once

#include "predprey/nn/dense_net.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace predprey::nn {

struct AdamState {
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  std::uint64_t step_count = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_stability = 1e-8;

  static AdamState for_net(const DenseNet& net);

  friend bool operator==(const AdamState&, const AdamState&) = default;
};

/// Bias-corrected Adam update of every parameter in `net`.
/// Throws NumericError, leaving net and state untouched, if any gradient is
/// non-finite.
void adam_step(DenseNet& net, AdamState& state, std::span<const double> grads, double rate);

}  // namespace predprey::nn
