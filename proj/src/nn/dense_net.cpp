#include "predprey/nn/dense_net.hpp"

#include "predprey/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace predprey::nn {

DenseNet::DenseNet(int input_dim, std::vector<int> hidden, int policy_dim)
    : input_dim_(input_dim), hidden_(std::move(hidden)), policy_dim_(policy_dim) {
  if (input_dim_ <= 0 || policy_dim_ <= 0) {
    throw StructuralError("DenseNet: input and policy dimensions must be positive");
  }
  std::size_t offset = 0;
  int prev = input_dim_;
  auto add = [&](int rows, int cols) {
    if (rows <= 0) throw StructuralError("DenseNet: layer widths must be positive");
    LayerSlot slot{offset, offset + static_cast<std::size_t>(rows) * cols, rows, cols};
    offset = slot.bias_offset + rows;
    slots_.push_back(slot);
  };
  for (int width : hidden_) {
    add(width, prev);
    prev = width;
  }
  add(policy_dim_, prev);
  add(1, prev);
  params_.assign(offset, 0.0);
}

DenseNet DenseNet::from_layer_sizes(std::span<const std::int64_t> sizes) {
  if (sizes.size() < 3 || sizes.back() != 1) {
    throw StructuralError("layer_sizes must be {input, hidden..., policy_dim, 1}");
  }
  std::vector<int> hidden;
  for (std::size_t i = 1; i + 2 < sizes.size(); ++i) hidden.push_back(static_cast<int>(sizes[i]));
  return DenseNet(static_cast<int>(sizes.front()), std::move(hidden),
                  static_cast<int>(sizes[sizes.size() - 2]));
}

namespace {

// Orthogonal rows/columns from the QR factorisation of a Gaussian matrix.
RowMatrix orthogonal(int rows, int cols, double gain, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const int big = std::max(rows, cols);
  const int small = std::min(rows, cols);
  Eigen::MatrixXd g(big, small);
  for (int i = 0; i < big; ++i)
    for (int j = 0; j < small; ++j) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(big, small);
  // Sign fix so the distribution is uniform over orthogonal matrices.
  Eigen::VectorXd d = qr.matrixQR().diagonal();
  for (int j = 0; j < small; ++j)
    if (d(j) < 0) q.col(j) *= -1.0;
  RowMatrix out = rows >= cols ? RowMatrix(q) : RowMatrix(q.transpose());
  return gain * out;
}

}  // namespace

DenseNet DenseNet::initialized(int input_dim, std::vector<int> hidden, int policy_dim,
                               std::uint64_t seed) {
  DenseNet net(input_dim, std::move(hidden), policy_dim);
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < net.num_layers(); ++k) {
    double gain = std::sqrt(2.0);
    if (k == net.policy_layer()) gain = 0.01;
    if (k == net.value_layer()) gain = 1.0;
    const auto& s = net.slots_[k];
    net.weights(k) = orthogonal(s.rows, s.cols, gain, rng);
  }
  return net;
}

std::vector<std::int64_t> DenseNet::layer_sizes() const {
  std::vector<std::int64_t> out{input_dim_};
  for (int h : hidden_) out.push_back(h);
  out.push_back(policy_dim_);
  out.push_back(1);
  return out;
}

Eigen::Map<RowMatrix> DenseNet::weights(std::size_t layer) {
  const auto& s = slots_.at(layer);
  return {params_.data() + s.weight_offset, s.rows, s.cols};
}

Eigen::Map<const RowMatrix> DenseNet::weights(std::size_t layer) const {
  const auto& s = slots_.at(layer);
  return {params_.data() + s.weight_offset, s.rows, s.cols};
}

Eigen::Map<Vector> DenseNet::bias(std::size_t layer) {
  const auto& s = slots_.at(layer);
  return {params_.data() + s.bias_offset, s.rows};
}

Eigen::Map<const Vector> DenseNet::bias(std::size_t layer) const {
  const auto& s = slots_.at(layer);
  return {params_.data() + s.bias_offset, s.rows};
}

void DenseNet::check_input(const RowMatrix& obs) const {
  if (obs.cols() != input_dim_) {
    throw StructuralError("DenseNet: observation has " + std::to_string(obs.cols()) +
                          " entries, network expects " + std::to_string(input_dim_));
  }
  if (!obs.allFinite()) throw InputError("DenseNet: observation contains non-finite values");
}

NetOutput DenseNet::forward(std::span<const double> obs) const {
  RowMatrix x = Eigen::Map<const RowMatrix>(obs.data(), 1, static_cast<Eigen::Index>(obs.size()));
  BatchOutput b = forward_batch(x);
  return {b.logits.row(0).transpose(), b.values(0)};
}

BatchOutput DenseNet::forward_batch(const RowMatrix& obs, ForwardCache* cache) const {
  check_input(obs);
  RowMatrix h = obs;
  if (cache) {
    cache->input = obs;
    cache->hidden.clear();
  }
  for (std::size_t k = 0; k < hidden_.size(); ++k) {
    RowMatrix z = h * weights(k).transpose();
    z.rowwise() += bias(k).transpose();
    h = z.array().tanh().matrix();
    if (cache) cache->hidden.push_back(h);
  }
  BatchOutput out;
  out.logits = h * weights(policy_layer()).transpose();
  out.logits.rowwise() += bias(policy_layer()).transpose();
  out.values = h * weights(value_layer()).row(0).transpose();
  out.values.array() += bias(value_layer())(0);
  return out;
}

std::vector<double> DenseNet::backward(const ForwardCache& cache, const RowMatrix& d_logits,
                                       const Vector& d_values) const {
  const Eigen::Index batch = cache.input.rows();
  if (d_logits.rows() != batch || d_logits.cols() != policy_dim_ || d_values.size() != batch ||
      cache.hidden.size() != hidden_.size()) {
    throw StructuralError("DenseNet::backward: upstream gradient shape mismatch");
  }
  std::vector<double> grads(params_.size(), 0.0);
  auto gw = [&](std::size_t k) {
    const auto& s = slots_[k];
    return Eigen::Map<RowMatrix>(grads.data() + s.weight_offset, s.rows, s.cols);
  };
  auto gb = [&](std::size_t k) {
    const auto& s = slots_[k];
    return Eigen::Map<Vector>(grads.data() + s.bias_offset, s.rows);
  };

  const RowMatrix& last = hidden_.empty() ? cache.input : cache.hidden.back();
  gw(policy_layer()) = d_logits.transpose() * last;
  gb(policy_layer()) = d_logits.colwise().sum().transpose();
  gw(value_layer()) = d_values.transpose() * last;
  gb(value_layer())(0) = d_values.sum();

  if (hidden_.empty()) return grads;

  RowMatrix dh = d_logits * weights(policy_layer());
  dh.noalias() += d_values * weights(value_layer()).row(0);
  for (std::size_t k = hidden_.size(); k-- > 0;) {
    const RowMatrix& act = cache.hidden[k];
    RowMatrix dz = (dh.array() * (1.0 - act.array().square())).matrix();
    const RowMatrix& below = k == 0 ? cache.input : cache.hidden[k - 1];
    gw(k) = dz.transpose() * below;
    gb(k) = dz.colwise().sum().transpose();
    if (k > 0) dh = dz * weights(k);
  }
  return grads;
}

std::vector<double> DenseNet::backward(std::span<const double> obs,
                                       std::span<const double> d_logits, double d_value) const {
  if (static_cast<int>(d_logits.size()) != policy_dim_) {
    throw StructuralError("DenseNet::backward: logits gradient has wrong length");
  }
  RowMatrix x = Eigen::Map<const RowMatrix>(obs.data(), 1, static_cast<Eigen::Index>(obs.size()));
  ForwardCache cache;
  forward_batch(x, &cache);
  RowMatrix dl = Eigen::Map<const RowMatrix>(d_logits.data(), 1, policy_dim_);
  Vector dv = Vector::Constant(1, d_value);
  return backward(cache, dl, dv);
}

bool DenseNet::all_finite() const {
  return std::all_of(params_.begin(), params_.end(), [](double p) { return std::isfinite(p); });
}

}  // namespace predprey::nn
