#include "urlab/timebase/scheduler.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

namespace urlab::timebase {
namespace {

// std heap functions build a max-heap; invert to pop the earliest (fire_at, seq).
struct Later {
  template <typename E>
  bool operator()(const E& a, const E& b) const {
    if (a.event.fire_at != b.event.fire_at) return a.event.fire_at > b.event.fire_at;
    return a.event.seq > b.event.seq;
  }
};

}  // namespace

Scheduler::Scheduler(ClockMode mode) : mode_(mode), origin_(std::chrono::steady_clock::now()) {}

Instant Scheduler::now() const {
  if (mode_ == ClockMode::Virtual) return logical_now_;
  const auto elapsed = std::chrono::duration_cast<Duration>(std::chrono::steady_clock::now() - origin_);
  return Instant(std::max<std::int64_t>(elapsed.count(), logical_now_.nanos()));
}

ScheduledEvent Scheduler::schedule_at(Instant fire_at, ContextId context, Action action) {
  if (fire_at < logical_now_) {
    throw std::logic_error("schedule_at: " + to_string(fire_at) + " is before the current instant " +
                           to_string(logical_now_));
  }
  ScheduledEvent ev{fire_at, next_seq_++, context};
  heap_.push_back(Entry{ev, std::move(action)});
  std::push_heap(heap_.begin(), heap_.end(), Later{});
  return ev;
}

std::optional<Instant> Scheduler::advance_to_next() {
  if (heap_.empty()) return std::nullopt;
  std::pop_heap(heap_.begin(), heap_.end(), Later{});
  Entry entry = std::move(heap_.back());
  heap_.pop_back();

  if (mode_ == ClockMode::RealTime) {
    const auto target = origin_ + entry.event.fire_at.since_start();
    std::this_thread::sleep_until(target);
    const auto late = std::chrono::duration_cast<Duration>(std::chrono::steady_clock::now() - target);
    max_lateness_ = std::max(max_lateness_, late);
  }
  logical_now_ = entry.event.fire_at;
  ++dispatched_;
  if (tracing_) trace_.push_back(entry.event);
  if (entry.action) entry.action();
  return entry.event.fire_at;
}

}  // namespace urlab::timebase
