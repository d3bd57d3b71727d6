#include "urlab/trpo/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

namespace urlab::trpo {
namespace {

constexpr char kMagic[4] = {'U', 'R', 'N', 'N'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::vector<unsigned char>& out, T value) {
  static_assert(std::endian::native == std::endian::little, "checkpoint writer assumes a little-endian host");
  unsigned char raw[sizeof(T)];
  std::memcpy(raw, &value, sizeof(T));
  out.insert(out.end(), raw, raw + sizeof(T));
}

template <typename T>
T take(const std::vector<unsigned char>& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw CheckpointError("checkpoint is truncated");
  T value;
  std::memcpy(&value, in.data() + pos, sizeof(T));
  pos += sizeof(T);
  return value;
}

std::uint64_t expected_params(const std::vector<int>& sizes) {
  std::uint64_t n = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    n += static_cast<std::uint64_t>(sizes[l]) * static_cast<std::uint64_t>(sizes[l + 1]) +
         static_cast<std::uint64_t>(sizes[l + 1]);
  }
  return n;
}

}  // namespace

std::vector<unsigned char> encode_checkpoint(const Checkpoint& ckpt) {
  if (ckpt.sizes.size() < 2) throw CheckpointError("checkpoint needs at least an input and an output size");
  if (expected_params(ckpt.sizes) != static_cast<std::uint64_t>(ckpt.params.size())) {
    throw CheckpointError("parameter count does not match the layer sizes");
  }
  std::vector<unsigned char> out(kMagic, kMagic + 4);
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.sizes.size() - 1));
  for (int s : ckpt.sizes) put<std::uint32_t>(out, static_cast<std::uint32_t>(s));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(ckpt.params.size()));
  for (Eigen::Index i = 0; i < ckpt.params.size(); ++i) put<double>(out, ckpt.params[i]);
  return out;
}

Checkpoint decode_checkpoint(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) throw CheckpointError("bad checkpoint magic");
  std::size_t pos = 4;
  if (take<std::uint32_t>(bytes, pos) != kVersion) throw CheckpointError("unsupported checkpoint version");
  const auto layers = take<std::uint32_t>(bytes, pos);
  Checkpoint c;
  for (std::uint32_t i = 0; i <= layers; ++i) c.sizes.push_back(static_cast<int>(take<std::uint32_t>(bytes, pos)));
  const auto count = take<std::uint64_t>(bytes, pos);
  if (count != expected_params(c.sizes)) throw CheckpointError("parameter count does not match the layer sizes");
  if (bytes.size() - pos != count * sizeof(double)) throw CheckpointError("checkpoint length mismatch");
  c.params.resize(static_cast<Eigen::Index>(count));
  for (Eigen::Index i = 0; i < c.params.size(); ++i) c.params[i] = take<double>(bytes, pos);
  return c;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  const auto bytes = encode_checkpoint(ckpt);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw CheckpointError("failed writing " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

}  // namespace urlab::trpo
