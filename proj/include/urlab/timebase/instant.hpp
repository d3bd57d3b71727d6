#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <string>

namespace urlab::timebase {

using Duration = std::chrono::nanoseconds;

/// A point in experiment time, counted in nanoseconds since the run started.
class Instant {
 public:
  constexpr Instant() = default;
  explicit Instant(std::int64_t nanos);

  static Instant from(Duration since_start) { return Instant(since_start.count()); }

  constexpr std::int64_t nanos() const { return nanos_; }
  constexpr Duration since_start() const { return Duration(nanos_); }
  double seconds() const { return static_cast<double>(nanos_) * 1e-9; }

  constexpr auto operator<=>(const Instant&) const = default;

  Instant& operator+=(Duration d);

  friend Instant operator+(Instant t, Duration d) { return t += d; }
  friend Duration operator-(Instant a, Instant b) { return Duration(a.nanos_ - b.nanos_); }

 private:
  std::int64_t nanos_ = 0;
};

std::string to_string(Instant t);

/// Duration expressed in (fractional) milliseconds, used for reporting.
inline double to_ms(Duration d) { return static_cast<double>(d.count()) * 1e-6; }

/// Rounds a duration given in seconds to the nearest nanosecond.
Duration from_seconds(double seconds);

}  // namespace urlab::timebase
