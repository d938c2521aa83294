#pragma once

#include <cstdint>

namespace predprey::nn {

/// Learning rate decaying linearly from `initial_rate` at step 0 to 0 at
/// `max_steps`. Steps past the end clamp to 0.
struct LrSchedule {
  double initial_rate = 3.0e-4;
  std::int64_t max_steps = 1'000'000;

  double rate_at(std::int64_t step) const;
};

}  // namespace predprey::nn
