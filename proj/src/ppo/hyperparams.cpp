#include "predprey/ppo/hyperparams.hpp"

#include "predprey/errors.hpp"

#include <sstream>

namespace predprey::ppo {

void PpoHyperparams::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("ppo hyperparameters: " + what);
  };
  require(batch_size > 0 && buffer_size > 0, "batch_size and buffer_size must be positive");
  require(buffer_size % batch_size == 0, "batch_size must divide buffer_size");
  require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0, 1)");
  require(gamma >= 0.0 && gamma <= 1.0, "gamma must lie in [0, 1]");
  require(lambda >= 0.0 && lambda <= 1.0, "lambda must lie in [0, 1]");
  require(beta >= 0.0, "beta must be non-negative");
  require(num_epoch > 0 && time_horizon > 0, "num_epoch and time_horizon must be positive");
  require(learning_rate >= 0.0, "learning_rate must be non-negative");
  require(max_steps > 0 && summary_freq > 0, "max_steps and summary_freq must be positive");
  require(value_loss_coeff >= 0.0, "value_loss_coeff must be non-negative");
}

std::vector<std::string> PpoHyperparams::range_warnings() const {
  std::vector<std::string> out;
  auto check = [&](const char* name, double v, double lo, double hi) {
    if (v < lo || v > hi) {
      std::ostringstream msg;
      msg << name << " = " << v << " is outside the recommended range [" << lo << ", " << hi << "]";
      out.push_back(msg.str());
    }
  };
  check("epsilon", epsilon, 0.1, 0.3);
  check("lambda", lambda, 0.9, 0.95);
  check("gamma", gamma, 0.8, 0.995);
  check("beta", beta, 1e-4, 1e-2);
  check("learning_rate", learning_rate, 1e-5, 1e-3);
  check("num_epoch", num_epoch, 3, 10);
  check("time_horizon", time_horizon, 32, 2048);
  return out;
}

}  // namespace predprey::ppo
