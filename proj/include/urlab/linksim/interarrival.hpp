#pragma once

#include <span>
#include <vector>

#include "urlab/timebase/instant.hpp"

namespace urlab::linksim {

/// Percentiles of consecutive arrival gaps, in milliseconds.
struct InterArrivalSummary {
  double p5 = 0, p25 = 0, p50 = 0, p75 = 0, p95 = 0;
  double min = 0, max = 0;
  std::size_t count = 0;  // number of gaps
};

/// Percentile of an ascending sample with linear interpolation between
/// order statistics (rank = p/100 * (n-1)).
double percentile_sorted(std::span<const double> sorted, double p);

/// Summarizes the gaps between consecutive `arrivals` (ascending). Throws
/// std::invalid_argument for fewer than two timestamps or unsorted input.
InterArrivalSummary interarrival_stats(std::span<const timebase::Instant> arrivals);

std::vector<double> interarrival_gaps_ms(std::span<const timebase::Instant> arrivals);

}  // namespace urlab::linksim
