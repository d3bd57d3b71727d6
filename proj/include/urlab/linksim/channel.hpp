#pragma once

#include <deque>
#include <optional>
#include <utility>
#include <vector>

#include "urlab/linksim/delay.hpp"

namespace urlab::linksim {

/// Single-producer, single-consumer ordered link. Messages are handed out in
/// send order once their delivery instant has been reached.
template <typename Message>
class Channel {
 public:
  Channel(DelayModel model, Rng rng) : clock_(std::move(model)), rng_(std::move(rng)) {}

  /// Enqueues `msg` and returns its delivery instant.
  Instant send(Message msg, Instant send_at) {
    const Instant delivery = clock_.next(send_at, rng_);
    queue_.emplace_back(std::move(msg), delivery);
    return delivery;
  }

  /// Removes and returns every message delivered at or before `now`.
  std::vector<std::pair<Message, Instant>> receive(Instant now) {
    std::vector<std::pair<Message, Instant>> out;
    while (!queue_.empty() && queue_.front().second <= now) {
      out.push_back(std::move(queue_.front()));
      queue_.pop_front();
    }
    return out;
  }

  std::optional<Instant> next_delivery() const {
    if (queue_.empty()) return std::nullopt;
    return queue_.front().second;
  }

  std::size_t in_flight() const { return queue_.size(); }
  const DelayModel& model() const { return clock_.model(); }
  bool passthrough() const { return std::holds_alternative<NoDelay>(clock_.model()); }

 private:
  DeliveryClock clock_;
  Rng rng_;
  std::deque<std::pair<Message, Instant>> queue_;
};

}  // namespace urlab::linksim
