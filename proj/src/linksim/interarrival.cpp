#include "urlab/linksim/interarrival.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace urlab::linksim {

double percentile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("percentile of an empty sample");
  const double rank = p / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::vector<double> interarrival_gaps_ms(std::span<const timebase::Instant> arrivals) {
  std::vector<double> gaps;
  gaps.reserve(arrivals.size() > 0 ? arrivals.size() - 1 : 0);
  for (std::size_t i = 1; i < arrivals.size(); ++i) {
    if (arrivals[i] < arrivals[i - 1]) throw std::invalid_argument("arrival timestamps must be sorted");
    gaps.push_back(timebase::to_ms(arrivals[i] - arrivals[i - 1]));
  }
  return gaps;
}

InterArrivalSummary interarrival_stats(std::span<const timebase::Instant> arrivals) {
  if (arrivals.size() < 2) throw std::invalid_argument("inter-arrival statistics need at least two timestamps");
  std::vector<double> gaps = interarrival_gaps_ms(arrivals);
  std::sort(gaps.begin(), gaps.end());
  InterArrivalSummary s;
  s.p5 = percentile_sorted(gaps, 5);
  s.p25 = percentile_sorted(gaps, 25);
  s.p50 = percentile_sorted(gaps, 50);
  s.p75 = percentile_sorted(gaps, 75);
  s.p95 = percentile_sorted(gaps, 95);
  s.min = gaps.front();
  s.max = gaps.back();
  s.count = gaps.size();
  return s;
}

}  // namespace urlab::linksim
