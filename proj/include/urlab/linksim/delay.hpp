#pragma once

#include <optional>
#include <string>
#include <variant>

#include "urlab/rng.hpp"
#include "urlab/timebase/instant.hpp"

namespace urlab::linksim {

using timebase::Duration;
using timebase::Instant;
using namespace std::chrono_literals;

/// Wired stream modeled directly as a truncated-normal inter-arrival gap.
/// Per-packet latency is held within `latency_band` of the nominal period so
/// the stream cannot drift away from its sender.
struct WiredInterArrival {
  Duration mean = 8ms;
  Duration sigma = 150us;
  Duration lo = 7800us;
  Duration hi = 8600us;
  Duration latency_band = 500us;
};

/// Wireless per-packet latency: lognormal, capped.
struct WirelessLognormal {
  Duration median = 4ms;
  double log_sigma = 1.2;
  Duration cap = 122ms;
};

/// Artificial exponential delay injector.
struct ExponentialInjector {
  Duration mean = 80ms;
};

struct NoDelay {};

using DelayModel = std::variant<NoDelay, WiredInterArrival, WirelessLognormal, ExponentialInjector>;

/// Throws std::invalid_argument for non-positive durations or unordered bounds.
void validate(const DelayModel& model);

/// One draw: a gap for WiredInterArrival, a latency for the others.
Duration sample_delay(const DelayModel& model, Rng& rng);

/// Draws from N(mean, sigma) truncated to [lo, hi] by inverse-CDF sampling.
double truncated_normal(Rng& rng, double mean, double sigma, double lo, double hi);

std::string describe(const DelayModel& model);

/// Delivery-time rule of an ordered (TCP-like) link.
class DeliveryClock {
 public:
  explicit DeliveryClock(DelayModel model);

  /// Delivery instant for a message sent at `send_at`. Throws
  /// std::invalid_argument when `send_at` precedes the previous send.
  Instant next(Instant send_at, Rng& rng);

  const DelayModel& model() const { return model_; }
  std::optional<Instant> last_delivery() const { return last_delivery_; }

 private:
  Instant wired(const WiredInterArrival& m, Instant send_at, Rng& rng);

  DelayModel model_;
  std::optional<Instant> last_send_;
  std::optional<Instant> last_delivery_;
};

}  // namespace urlab::linksim
