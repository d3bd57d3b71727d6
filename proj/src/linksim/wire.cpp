#include "urlab/linksim/wire.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace urlab::linksim {
namespace {

template <typename T>
void put_le(std::uint8_t*& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    *out++ = static_cast<std::uint8_t>(value >> (8 * i));
  }
}

template <typename T>
T get_le(const std::uint8_t*& in) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(*in++) << (8 * i);
  }
  return value;
}

void put_vec(std::uint8_t*& out, const ursim::Vec6& v) {
  for (int j = 0; j < 6; ++j) put_le(out, std::bit_cast<std::uint64_t>(v[j]));
}

ursim::Vec6 get_vec(const std::uint8_t*& in) {
  ursim::Vec6 v;
  for (int j = 0; j < 6; ++j) v[j] = std::bit_cast<double>(get_le<std::uint64_t>(in));
  return v;
}

}  // namespace

StatusBytes encode_status(const ursim::StatusPacket& pkt) {
  StatusBytes bytes{};
  std::uint8_t* out = bytes.data();
  out = std::copy(kStatusMagic.begin(), kStatusMagic.end(), out);
  *out++ = kStatusVersion;
  put_le(out, pkt.seq);
  put_le(out, pkt.timestamp_ns);
  put_vec(out, pkt.q);
  put_vec(out, pkt.qd);
  put_vec(out, pkt.qdd_target);
  put_vec(out, pkt.torque_target);
  put_vec(out, pkt.current);
  return bytes;
}

ursim::StatusPacket decode_status(std::span<const std::uint8_t> data) {
  if (data.size() != kStatusPacketSize) {
    throw DecodeError(DecodeErrorKind::Length, "status packet must be " + std::to_string(kStatusPacketSize) +
                                                   " bytes, got " + std::to_string(data.size()));
  }
  if (!std::equal(kStatusMagic.begin(), kStatusMagic.end(), data.begin())) {
    throw DecodeError(DecodeErrorKind::Magic, "status packet magic mismatch");
  }
  if (data[4] != kStatusVersion) {
    throw DecodeError(DecodeErrorKind::Version, "unsupported status packet version " + std::to_string(data[4]));
  }
  const std::uint8_t* in = data.data() + 5;
  ursim::StatusPacket pkt;
  pkt.seq = get_le<std::uint32_t>(in);
  pkt.timestamp_ns = get_le<std::uint64_t>(in);
  pkt.q = get_vec(in);
  pkt.qd = get_vec(in);
  pkt.qdd_target = get_vec(in);
  pkt.torque_target = get_vec(in);
  pkt.current = get_vec(in);
  return pkt;
}

}  // namespace urlab::linksim
