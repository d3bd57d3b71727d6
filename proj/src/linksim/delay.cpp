#include "urlab/linksim/delay.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

namespace urlab::linksim {
namespace {

double ns(Duration d) { return static_cast<double>(d.count()); }

Duration round_ns(double v) { return Duration(std::llround(v)); }

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

void validate(const DelayModel& model) {
  std::visit(Overloaded{
                 [](const NoDelay&) {},
                 [](const WiredInterArrival& m) {
                   if (m.mean <= 0ns || m.sigma <= 0ns || m.lo <= 0ns || m.latency_band < 0ns) {
                     throw std::invalid_argument("wired delay durations must be positive");
                   }
                   if (!(m.lo <= m.mean && m.mean <= m.hi)) {
                     throw std::invalid_argument("wired truncation bounds must satisfy lo <= mean <= hi");
                   }
                 },
                 [](const WirelessLognormal& m) {
                   if (m.median <= 0ns || m.cap <= 0ns || !(m.log_sigma > 0.0)) {
                     throw std::invalid_argument("wireless delay parameters must be positive");
                   }
                 },
                 [](const ExponentialInjector& m) {
                   if (m.mean <= 0ns) throw std::invalid_argument("injector mean must be positive");
                 },
             },
             model);
}

double truncated_normal(Rng& rng, double mean, double sigma, double lo, double hi) {
  const boost::math::normal_distribution<double> dist(mean, sigma);
  const double flo = boost::math::cdf(dist, lo);
  const double fhi = boost::math::cdf(dist, hi);
  const double u = flo + rng.uniform() * (fhi - flo);
  if (!(u > 0.0 && u < 1.0)) return std::clamp(mean, lo, hi);
  return std::clamp(boost::math::quantile(dist, u), lo, hi);
}

Duration sample_delay(const DelayModel& model, Rng& rng) {
  return std::visit(Overloaded{
                        [](const NoDelay&) { return Duration::zero(); },
                        [&](const WiredInterArrival& m) {
                          return round_ns(truncated_normal(rng, ns(m.mean), ns(m.sigma), ns(m.lo), ns(m.hi)));
                        },
                        [&](const WirelessLognormal& m) {
                          const double draw = ns(m.median) * std::exp(m.log_sigma * rng.normal());
                          return round_ns(std::min(draw, ns(m.cap)));
                        },
                        [&](const ExponentialInjector& m) { return round_ns(rng.exponential(ns(m.mean))); },
                    },
                    model);
}

std::string describe(const DelayModel& model) {
  return std::visit(Overloaded{
                        [](const NoDelay&) { return std::string("none"); },
                        [](const WiredInterArrival&) { return std::string("wired"); },
                        [](const WirelessLognormal&) { return std::string("wireless"); },
                        [](const ExponentialInjector& m) {
                          return "exponential(" + std::to_string(timebase::to_ms(m.mean)) + "ms)";
                        },
                    },
                    model);
}

DeliveryClock::DeliveryClock(DelayModel model) : model_(model) { validate(model_); }

Instant DeliveryClock::wired(const WiredInterArrival& m, Instant send_at, Rng& rng) {
  if (!last_delivery_) return send_at + sample_delay(m, rng);
  const Instant last = *last_delivery_;
  // Gap range that keeps latency within the band around the nominal period.
  const double lat_lo = ns(m.mean - m.latency_band);
  const double lat_hi = ns(m.mean + m.latency_band);
  const double base = ns(send_at - last);
  const double lo = std::max(ns(m.lo), base + lat_lo);
  const double hi = std::min(ns(m.hi), base + lat_hi);
  double gap;
  if (lo <= hi) {
    gap = truncated_normal(rng, ns(m.mean), ns(m.sigma), lo, hi);
  } else if (hi < ns(m.lo)) {
    gap = ns(m.lo);  // running late even at the shortest gap
  } else {
    // Sender paused: the stream restarts from this send.
    return std::max(send_at + sample_delay(m, rng), last);
  }
  return last + round_ns(gap);
}

Instant DeliveryClock::next(Instant send_at, Rng& rng) {
  if (last_send_ && send_at < *last_send_) {
    throw std::invalid_argument("channel send at " + to_string(send_at) + " precedes previous send at " +
                                to_string(*last_send_));
  }
  last_send_ = send_at;
  Instant delivery = std::visit(Overloaded{
                                    [&](const NoDelay&) {
                                      return last_delivery_ ? std::max(send_at, *last_delivery_) : send_at;
                                    },
                                    [&](const WiredInterArrival& m) { return wired(m, send_at, rng); },
                                    [&](const auto& m) {
                                      const Instant direct = send_at + sample_delay(m, rng);
                                      return last_delivery_ ? std::max(direct, *last_delivery_ + 1us) : direct;
                                    },
                                },
                                model_);
  last_delivery_ = delivery;
  return delivery;
}

}  // namespace urlab::linksim
