#include "predprey/nn/checkpoint.hpp"

#include "predprey/errors.hpp"
#include "predprey/binary.hpp"

#include <boost/crc.hpp>

#include <fstream>
#include <sstream>

namespace predprey::nn {

namespace {

std::uint32_t crc32(std::string_view bytes) {
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

}  // namespace

std::string encode_checkpoint(const Checkpoint& ckpt) {
  const DenseNet& net = ckpt.net;
  if (ckpt.adam.first_moment.size() != net.num_parameters() ||
      ckpt.adam.second_moment.size() != net.num_parameters()) {
    throw StructuralError("checkpoint: Adam moments do not match network parameters");
  }
  ByteWriter w;
  w.bytes(kCheckpointTag);
  w.u32(kCheckpointVersion);
  const auto sizes = net.layer_sizes();
  w.u32(static_cast<std::uint32_t>(sizes.size()));
  for (auto s : sizes) w.i64(s);
  for (std::size_t k = 0; k < net.num_layers(); ++k) {
    auto wt = net.weights(k);
    w.f64s({wt.data(), static_cast<std::size_t>(wt.size())});
    auto b = net.bias(k);
    w.f64s({b.data(), static_cast<std::size_t>(b.size())});
  }
  w.f64s(ckpt.adam.first_moment);
  w.f64s(ckpt.adam.second_moment);
  w.u64(ckpt.adam.step_count);
  w.f64(ckpt.adam.beta1);
  w.f64(ckpt.adam.beta2);
  w.f64(ckpt.adam.eps_stability);
  w.u64(ckpt.seed);
  w.u64(ckpt.global_step);
  w.str(ckpt.trainer_state);
  const std::uint32_t crc = crc32(w.data());
  w.u32(crc);
  return w.take();
}

Checkpoint decode_checkpoint(std::string_view bytes) {
  if (bytes.size() < kCheckpointTag.size() + 8) throw IoError("checkpoint truncated");
  const std::string_view body = bytes.substr(0, bytes.size() - 4);
  ByteReader tail(bytes.substr(bytes.size() - 4));
  if (tail.u32() != crc32(body)) throw IoError("checkpoint checksum mismatch (corrupted file)");

  ByteReader r(body);
  if (r.bytes(kCheckpointTag.size()) != kCheckpointTag) throw IoError("not a checkpoint file");
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    throw IoError("checkpoint version " + std::to_string(version) + " unsupported (expected " +
                  std::to_string(kCheckpointVersion) + ")");
  }
  const std::uint32_t n = r.u32();
  if (n < 3 || n > 64) throw IoError("checkpoint: implausible layer count");
  std::vector<std::int64_t> sizes(n);
  for (auto& s : sizes) {
    s = r.i64();
    if (s <= 0 || s > (1 << 20)) throw IoError("checkpoint: implausible layer size");
  }
  DenseNet net = DenseNet::from_layer_sizes(sizes);
  for (std::size_t k = 0; k < net.num_layers(); ++k) {
    auto wt = net.weights(k);
    auto wv = r.f64s(static_cast<std::size_t>(wt.size()));
    std::copy(wv.begin(), wv.end(), wt.data());
    auto b = net.bias(k);
    auto bv = r.f64s(static_cast<std::size_t>(b.size()));
    std::copy(bv.begin(), bv.end(), b.data());
  }
  Checkpoint ckpt{std::move(net), {}, 0, 0, {}};
  ckpt.adam.first_moment = r.f64s(ckpt.net.num_parameters());
  ckpt.adam.second_moment = r.f64s(ckpt.net.num_parameters());
  ckpt.adam.step_count = r.u64();
  ckpt.adam.beta1 = r.f64();
  ckpt.adam.beta2 = r.f64();
  ckpt.adam.eps_stability = r.f64();
  ckpt.seed = r.u64();
  ckpt.global_step = r.u64();
  ckpt.trainer_state = r.str();
  if (r.remaining() != 0) throw IoError("checkpoint has trailing bytes");
  return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  const std::string bytes = encode_checkpoint(ckpt);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move checkpoint into place: " + ec.message());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return decode_checkpoint(ss.str());
}

}  // namespace predprey::nn
