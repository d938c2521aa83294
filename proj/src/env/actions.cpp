#include "predprey/env/actions.hpp"

#include "predprey/errors.hpp"

#include <string>

namespace predprey::env {

ActionBranches::ActionBranches(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty()) throw ConfigError("action space needs at least one branch");
  for (int s : sizes_) {
    if (s <= 0) throw ConfigError("action branch sizes must be positive");
    offsets_.push_back(logits_);
    logits_ += s;
    joint_ *= s;
  }
}

int ActionBranches::encode(const std::vector<int>& choices) const {
  if (choices.size() != sizes_.size()) throw InputError("action has wrong number of branches");
  int idx = 0;
  for (std::size_t b = 0; b < sizes_.size(); ++b) {
    if (choices[b] < 0 || choices[b] >= sizes_[b]) {
      throw InputError("action branch " + std::to_string(b) + " out of range");
    }
    idx = idx * sizes_[b] + choices[b];
  }
  return idx;
}

std::vector<int> ActionBranches::decode(int joint) const {
  if (joint < 0 || joint >= joint_) {
    throw InputError("joint action index " + std::to_string(joint) + " out of range");
  }
  std::vector<int> out(sizes_.size());
  for (std::size_t b = sizes_.size(); b-- > 0;) {
    out[b] = joint % sizes_[b];
    joint /= sizes_[b];
  }
  return out;
}

ActionBranches prey_action_space() { return ActionBranches({2, 3}); }

}  // namespace predprey::env
