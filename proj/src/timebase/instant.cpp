#include "urlab/timebase/instant.hpp"

#include <cmath>
#include <stdexcept>

namespace urlab::timebase {

Instant::Instant(std::int64_t nanos) : nanos_(nanos) {
  if (nanos < 0) {
    throw std::invalid_argument("Instant must be non-negative, got " + std::to_string(nanos) + " ns");
  }
}

Instant& Instant::operator+=(Duration d) {
  const std::int64_t next = nanos_ + d.count();
  if (next < 0) {
    throw std::invalid_argument("Instant arithmetic produced a negative time");
  }
  nanos_ = next;
  return *this;
}

std::string to_string(Instant t) { return std::to_string(t.nanos()) + "ns"; }

Duration from_seconds(double seconds) {
  if (!std::isfinite(seconds)) {
    throw std::invalid_argument("duration must be finite");
  }
  return Duration(std::llround(seconds * 1e9));
}

}  // namespace urlab::timebase
