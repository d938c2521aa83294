#include "predprey/nn/lr_schedule.hpp"

#include "predprey/errors.hpp"

namespace predprey::nn {

double LrSchedule::rate_at(std::int64_t step) const {
  if (max_steps <= 0) throw ConfigError("LrSchedule: max_steps must be positive");
  if (step < 0) throw InputError("LrSchedule: negative step");
  if (step >= max_steps) return 0.0;
  return initial_rate * (1.0 - static_cast<double>(step) / static_cast<double>(max_steps));
}

}  // namespace predprey::nn
