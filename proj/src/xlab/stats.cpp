#include "urlab/xlab/stats.hpp"

#include <numeric>
#include <stdexcept>
#include <vector>

namespace urlab::xlab {

double mean(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("mean of an empty sample");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

BootstrapResult paired_bootstrap(std::span<const double> a, std::span<const double> b, int resamples, Rng& rng) {
  if (a.size() != b.size() || a.empty()) throw std::invalid_argument("paired_bootstrap needs equal, non-empty samples");
  if (resamples <= 0) throw std::invalid_argument("paired_bootstrap needs a positive resample count");
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  BootstrapResult r;
  r.mean_difference = mean(diff);
  r.resamples = resamples;
  int not_greater = 0;
  for (int s = 0; s < resamples; ++s) {
    double sum = 0.0;
    for (std::size_t i = 0; i < diff.size(); ++i) sum += diff[rng.index(diff.size())];
    if (sum <= 0.0) ++not_greater;
  }
  r.p_value = static_cast<double>(not_greater) / resamples;
  return r;
}

double final_quarter_mean(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("final_quarter_mean of an empty series");
  const std::size_t count = std::max<std::size_t>(1, v.size() / 4);
  return mean(v.subspan(v.size() - count));
}

}  // namespace urlab::xlab
