#pragma once

#include <cstdint>
#include <string_view>

#include <boost/random/mersenne_twister.hpp>

namespace urlab {

/// Seeded random stream. Distributions come from Boost.Random, whose
/// algorithms are fixed across standard libraries, so a seed reproduces the
/// same draws on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  double uniform();                        // [0, 1)
  double uniform(double lo, double hi);    // [lo, hi)
  double normal();                         // N(0, 1)
  double exponential(double mean);
  std::uint64_t next_u64() { return engine_(); }
  std::size_t index(std::size_t n);        // uniform in [0, n)

 private:
  boost::random::mt19937_64 engine_;
};

/// Stable 64-bit seed for the stream `label` under `master_seed`.
std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view label);

}  // namespace urlab
