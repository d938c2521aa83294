#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace predprey::nn {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

struct NetOutput {
  Vector logits;
  double value = 0.0;
};

struct BatchOutput {
  RowMatrix logits;  // batch x policy_dim
  Vector values;     // batch
};

/// Activations retained by forward_batch for a subsequent backward pass.
struct ForwardCache {
  RowMatrix input;
  std::vector<RowMatrix> hidden;  // post-tanh activations per trunk layer
};

/// Actor-critic feed-forward network: a tanh trunk feeding a linear policy head
/// (logits) and a linear scalar value head.
///
/// All parameters live in one contiguous buffer, laid out per layer as a
/// row-major (out x in) weight matrix followed by its bias vector, in the order
/// trunk layers, policy head, value head. Gradients use the same layout.
class DenseNet {
 public:
  /// All-zero network. `hidden` may be empty, in which case both heads read
  /// the observation directly.
  DenseNet(int input_dim, std::vector<int> hidden, int policy_dim);

  /// Orthogonal initialisation: trunk gain sqrt(2), policy head 0.01, value head 1.
  static DenseNet initialized(int input_dim, std::vector<int> hidden, int policy_dim,
                              std::uint64_t seed);

  /// Builds a network from a layer_sizes list {input, hidden..., policy_dim, 1}.
  static DenseNet from_layer_sizes(std::span<const std::int64_t> sizes);

  int input_dim() const { return input_dim_; }
  int policy_dim() const { return policy_dim_; }
  const std::vector<int>& hidden() const { return hidden_; }
  std::vector<std::int64_t> layer_sizes() const;

  /// Trunk layers, then the policy head, then the value head.
  std::size_t num_layers() const { return hidden_.size() + 2; }
  std::size_t policy_layer() const { return hidden_.size(); }
  std::size_t value_layer() const { return hidden_.size() + 1; }

  Eigen::Map<RowMatrix> weights(std::size_t layer);
  Eigen::Map<const RowMatrix> weights(std::size_t layer) const;
  Eigen::Map<Vector> bias(std::size_t layer);
  Eigen::Map<const Vector> bias(std::size_t layer) const;

  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }
  std::size_t num_parameters() const { return params_.size(); }

  NetOutput forward(std::span<const double> obs) const;
  BatchOutput forward_batch(const RowMatrix& obs, ForwardCache* cache = nullptr) const;

  /// Gradient of sum_b (d_logits[b] . logits[b] + d_values[b] * value[b]) with
  /// respect to every parameter, in the flat parameter layout.
  std::vector<double> backward(const ForwardCache& cache, const RowMatrix& d_logits,
                               const Vector& d_values) const;

  /// Single-observation convenience wrapper around forward_batch + backward.
  std::vector<double> backward(std::span<const double> obs, std::span<const double> d_logits,
                               double d_value) const;

  bool all_finite() const;

  friend bool operator==(const DenseNet&, const DenseNet&) = default;

 private:
  struct LayerSlot {
    std::size_t weight_offset;
    std::size_t bias_offset;
    int rows;
    int cols;
    bool operator==(const LayerSlot&) const = default;
  };

  void check_input(const RowMatrix& obs) const;

  int input_dim_;
  std::vector<int> hidden_;
  int policy_dim_;
  std::vector<LayerSlot> slots_;
  std::vector<double> params_;
};

}  // namespace predprey::nn
