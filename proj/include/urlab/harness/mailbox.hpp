#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <stdexcept>

#include "urlab/timebase/instant.hpp"

namespace urlab::harness {

using timebase::Duration;
using timebase::Instant;

/// Read-before-first-write on a mailbox: a startup-order bug.
class EmptyMailboxError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

template <typename T>
struct MailboxRead {
  T value;
  Duration age;
  std::uint64_t counter;
};

/// Single-slot latest-value exchange. Reads never block on a writer for
/// longer than one copy and never observe a partial write.
template <typename T>
class Mailbox {
 public:
  void write(T value, Instant at) {
    std::lock_guard lock(mutex_);
    value_ = std::move(value);
    written_at_ = at;
    ++counter_;
  }

  MailboxRead<T> read_latest(Instant now) const {
    std::lock_guard lock(mutex_);
    if (!value_) throw EmptyMailboxError("mailbox read before the first write");
    const Duration age = now >= written_at_ ? now - written_at_ : Duration::zero();
    return {*value_, age, counter_};
  }

  std::optional<T> peek() const {
    std::lock_guard lock(mutex_);
    return value_;
  }

  bool empty() const {
    std::lock_guard lock(mutex_);
    return !value_.has_value();
  }

  std::uint64_t counter() const {
    std::lock_guard lock(mutex_);
    return counter_;
  }

  void clear() {
    std::lock_guard lock(mutex_);
    value_.reset();
  }

 private:
  mutable std::mutex mutex_;
  std::optional<T> value_;
  Instant written_at_;
  std::uint64_t counter_ = 0;
};

}  // namespace urlab::harness
