#pragma once

#include <cstddef>
#include <vector>

namespace predprey::env {

/// A multi-discrete action space: one categorical choice per branch, encoded
/// as a single joint index in row-major (first branch most significant) order.
class ActionBranches {
 public:
  explicit ActionBranches(std::vector<int> sizes);

  const std::vector<int>& sizes() const { return sizes_; }
  std::size_t num_branches() const { return sizes_.size(); }
  /// Number of joint actions (product of branch sizes).
  int joint_size() const { return joint_; }
  /// Sum of branch sizes: the number of policy logits.
  int logit_count() const { return logits_; }
  /// Offset of branch b's logits within the logit vector.
  int logit_offset(std::size_t branch) const { return offsets_.at(branch); }

  int encode(const std::vector<int>& choices) const;
  std::vector<int> decode(int joint) const;

  friend bool operator==(const ActionBranches&, const ActionBranches&) = default;

 private:
  std::vector<int> sizes_;
  std::vector<int> offsets_;
  int joint_ = 1;
  int logits_ = 0;
};

enum class Move : int { None = 0, Forward = 1 };
enum class Turn : int { None = 0, Left = 1, Right = 2 };

/// Prey locomotion: movement {none, forward} x rotation {none, left, right}.
ActionBranches prey_action_space();

inline int encode_prey_action(Move m, Turn t) {
  return static_cast<int>(m) * 3 + static_cast<int>(t);
}

}  // namespace predprey::env
