#pragma once

#include <filesystem>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace urlab::trpo {

/// Network checkpoint layout (all integers little-endian):
///   "URNN" | u32 version = 1 | u32 layer count L | L+1 x u32 layer sizes |
///   u64 parameter count P | P x f64 parameters
struct Checkpoint {
  std::vector<int> sizes;
  Eigen::VectorXd params;

  bool operator==(const Checkpoint&) const = default;
};

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<unsigned char> encode_checkpoint(const Checkpoint& ckpt);
Checkpoint decode_checkpoint(const std::vector<unsigned char>& bytes);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace urlab::trpo
