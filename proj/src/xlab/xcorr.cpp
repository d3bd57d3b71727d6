#include "urlab/xlab/xcorr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace urlab::xlab {

std::optional<double> Correlogram::at(int lag) const {
  for (std::size_t i = 0; i < lags.size(); ++i) {
    if (lags[i] == lag) return values[i];
  }
  return std::nullopt;
}

std::optional<int> Correlogram::argmax() const {
  std::optional<int> best;
  double best_value = 0.0;
  for (std::size_t i = 0; i < lags.size(); ++i) {
    if (values[i] && (!best || *values[i] > best_value)) {
      best = lags[i];
      best_value = *values[i];
    }
  }
  return best;
}

Correlogram cross_correlation(std::span<const double> x, std::span<const double> y, int max_lag) {
  if (x.size() != y.size()) throw std::invalid_argument("cross_correlation: series lengths differ");
  if (max_lag < 0) throw std::invalid_argument("cross_correlation: max_lag must be non-negative");
  if (x.size() <= static_cast<std::size_t>(max_lag)) {
    throw std::invalid_argument("cross_correlation: series must be longer than max_lag");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw std::invalid_argument("cross_correlation: non-finite sample");
  }
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  Correlogram c;
  for (int k = -max_lag; k <= max_lag; ++k) {
    // Overlap: t in [t0, t1) with t + k in range.
    const std::ptrdiff_t t0 = k < 0 ? -k : 0;
    const std::ptrdiff_t t1 = k < 0 ? n : n - k;
    const auto m = static_cast<double>(t1 - t0);
    double mx = 0.0, my = 0.0;
    for (std::ptrdiff_t t = t0; t < t1; ++t) {
      mx += x[t];
      my += y[t + k];
    }
    mx /= m;
    my /= m;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::ptrdiff_t t = t0; t < t1; ++t) {
      const double dx = x[t] - mx, dy = y[t + k] - my;
      sxy += dx * dy;
      sxx += dx * dx;
      syy += dy * dy;
    }
    c.lags.push_back(k);
    if (sxx > 0.0 && syy > 0.0) {
      c.values.push_back(std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0));
    } else {
      c.values.push_back(std::nullopt);
    }
  }
  return c;
}

}  // namespace urlab::xlab
