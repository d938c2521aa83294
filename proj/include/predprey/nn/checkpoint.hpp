#pragma once

#include "predprey/nn/adam.hpp"
#include "predprey/nn/dense_net.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace predprey::nn {

inline constexpr std::string_view kCheckpointTag{"PPCKPT\0\0", 8};
inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Everything a checkpoint file holds. `trainer_state` is an opaque blob owned
/// by the training harness (empty for plain network snapshots).
struct Checkpoint {
  DenseNet net;
  AdamState adam;
  std::uint64_t seed = 0;
  std::uint64_t global_step = 0;
  std::string trainer_state;
};

/// Layout, all little-endian:
///   tag[8] u32 version
///   u32 n  i64 layer_sizes[n]
///   per layer (trunk..., policy, value): f64 weights row-major, f64 bias
///   f64 adam first moments, f64 adam second moments, u64 step_count,
///   f64 beta1, f64 beta2, f64 eps
///   u64 seed, u64 global_step
///   u64 len, trainer_state bytes
///   u32 crc32 of everything above
std::string encode_checkpoint(const Checkpoint& ckpt);
Checkpoint decode_checkpoint(std::string_view bytes);

/// Atomic write (temp file + rename).
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace predprey::nn
