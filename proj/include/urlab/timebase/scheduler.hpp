#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "urlab/timebase/instant.hpp"

namespace urlab::timebase {

enum class ClockMode { RealTime, Virtual };

using ContextId = std::uint32_t;

struct ScheduledEvent {
  Instant fire_at;
  std::uint64_t seq = 0;
  ContextId context = 0;

  bool operator==(const ScheduledEvent&) const = default;
};

/// Single-owner event queue and clock.
///
/// Virtual mode jumps the clock from event to event; events that share an
/// instant fire in the order they were scheduled. Real-time mode runs the
/// same queue but sleeps until each event's instant, so an event is never
/// dispatched early (late dispatch is recorded in max_lateness()).
class Scheduler {
 public:
  using Action = std::function<void()>;

  explicit Scheduler(ClockMode mode = ClockMode::Virtual);

  ClockMode mode() const { return mode_; }

  /// Virtual: the instant of the event being (or last) dispatched.
  /// RealTime: wall-clock time elapsed since construction.
  Instant now() const;

  /// Enqueues `action` to run in `context` at `fire_at`. Throws
  /// std::logic_error when `fire_at` lies before the current dispatch instant.
  ScheduledEvent schedule_at(Instant fire_at, ContextId context, Action action);

  /// Dispatches the earliest pending event and returns its instant.
  /// Returns nullopt when nothing is pending (run complete or deadlocked).
  std::optional<Instant> advance_to_next();

  std::size_t pending() const { return heap_.size(); }

  /// When enabled, every dispatched event is appended to trace().
  void set_tracing(bool on) { tracing_ = on; }
  const std::vector<ScheduledEvent>& trace() const { return trace_; }

  Duration max_lateness() const { return max_lateness_; }
  std::uint64_t dispatched() const { return dispatched_; }

 private:
  struct Entry {
    ScheduledEvent event;
    Action action;
  };

  ClockMode mode_;
  std::chrono::steady_clock::time_point origin_;
  Instant logical_now_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t dispatched_ = 0;
  std::vector<Entry> heap_;
  bool tracing_ = false;
  std::vector<ScheduledEvent> trace_;
  Duration max_lateness_{0};
};

}  // namespace urlab::timebase
