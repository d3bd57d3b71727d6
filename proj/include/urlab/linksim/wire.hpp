#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "urlab/ursim/types.hpp"

namespace urlab::linksim {

// "URSP" | version u8 | seq u32 LE | timestamp_ns u64 LE | 5 x 6 x f64 LE
inline constexpr std::array<std::uint8_t, 4> kStatusMagic{'U', 'R', 'S', 'P'};
inline constexpr std::uint8_t kStatusVersion = 1;
inline constexpr std::size_t kStatusPacketSize = 4 + 1 + 4 + 8 + 5 * 6 * 8;
static_assert(kStatusPacketSize == 257);

using StatusBytes = std::array<std::uint8_t, kStatusPacketSize>;

enum class DecodeErrorKind { Length, Magic, Version };

class DecodeError : public std::runtime_error {
 public:
  DecodeError(DecodeErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  DecodeErrorKind kind() const { return kind_; }

 private:
  DecodeErrorKind kind_;
};

StatusBytes encode_status(const ursim::StatusPacket& pkt);
ursim::StatusPacket decode_status(std::span<const std::uint8_t> data);

}  // namespace urlab::linksim
