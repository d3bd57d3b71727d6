#pragma once

#include <cstdint>
#include <string_view>

#include "urlab/rng.hpp"

namespace urlab::xlab {

/// Per-purpose seeds derived from one master seed. Each depends only on the
/// master seed and its label, never on the experiment configuration, so
/// variants that share a seed share initial networks and target sequences.
struct SeedStreams {
  std::uint64_t master = 0;
  std::uint64_t policy = 0;       // network initialization
  std::uint64_t targets = 0;      // episode targets
  std::uint64_t medium = 0;       // status-stream delays
  std::uint64_t injector = 0;     // artificial delay injectors
  std::uint64_t exploration = 0;  // action sampling
  std::uint64_t critic = 0;       // critic minibatch shuffling
  std::uint64_t controller = 0;   // current-sensor noise

  Rng stream(std::string_view label) const;
};

SeedStreams derive_streams(std::uint64_t master_seed);

}  // namespace urlab::xlab
