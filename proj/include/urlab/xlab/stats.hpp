#pragma once

#include <cstdint>
#include <span>

#include "urlab/rng.hpp"

namespace urlab::xlab {

double mean(std::span<const double> v);

struct BootstrapResult {
  double mean_difference = 0.0;  // mean over pairs of (a - b)
  double p_value = 1.0;          // share of resampled mean differences <= 0
  int resamples = 0;
};

/// Paired bootstrap for "a exceeds b": resamples pair indices with
/// replacement and counts how often the resampled mean of a - b is <= 0.
BootstrapResult paired_bootstrap(std::span<const double> a, std::span<const double> b, int resamples, Rng& rng);

/// Mean of the last quarter of `v` (at least one element).
double final_quarter_mean(std::span<const double> v);

}  // namespace urlab::xlab
