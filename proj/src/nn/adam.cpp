#include "predprey/nn/adam.hpp"

#include "predprey/errors.hpp"

#include <cmath>
#include <string>

namespace predprey::nn {

AdamState AdamState::for_net(const DenseNet& net) {
  AdamState s;
  s.first_moment.assign(net.num_parameters(), 0.0);
  s.second_moment.assign(net.num_parameters(), 0.0);
  return s;
}

void adam_step(DenseNet& net, AdamState& state, std::span<const double> grads, double rate) {
  const std::size_t n = net.num_parameters();
  if (grads.size() != n || state.first_moment.size() != n || state.second_moment.size() != n) {
    throw StructuralError("adam_step: gradient/moment shapes do not match the network");
  }
  if (!(rate >= 0.0)) throw InputError("adam_step: learning rate must be >= 0");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(grads[i])) {
      throw NumericError("adam_step: non-finite gradient at parameter " + std::to_string(i) +
                         "; update rejected");
    }
  }

  state.step_count += 1;
  const double t = static_cast<double>(state.step_count);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  auto params = net.parameters();
  for (std::size_t i = 0; i < n; ++i) {
    double& m = state.first_moment[i];
    double& v = state.second_moment[i];
    m = state.beta1 * m + (1.0 - state.beta1) * grads[i];
    v = state.beta2 * v + (1.0 - state.beta2) * grads[i] * grads[i];
    const double m_hat = m / c1;
    const double v_hat = v / c2;
    params[i] -= rate * m_hat / (std::sqrt(v_hat) + state.eps_stability);
  }
}

}  // namespace predprey::nn
