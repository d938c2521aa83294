#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace predprey::ppo {

struct PpoHyperparams {
  int batch_size = 1024;
  int buffer_size = 10240;
  double epsilon = 0.2;
  double beta = 1.0e-2;
  double gamma = 0.99;
  double lambda = 0.95;
  int num_epoch = 3;
  int time_horizon = 64;
  double learning_rate = 3.0e-4;
  std::int64_t max_steps = 1'000'000;
  double value_loss_coeff = 0.5;
  std::int64_t summary_freq = 10'000;
  bool normalize_advantages = true;

  /// Hard errors: non-positive sizes, batch_size not dividing buffer_size,
  /// epsilon outside (0, 1), gamma or lambda outside [0, 1].
  void validate() const;

  /// Soft checks against the commonly recommended ranges; one message per
  /// parameter outside its range.
  std::vector<std::string> range_warnings() const;

  friend bool operator==(const PpoHyperparams&, const PpoHyperparams&) = default;
};

}  // namespace predprey::ppo
