#pragma once

#include <optional>
#include <span>
#include <vector>

namespace urlab::xlab {

/// Pearson correlation of x_t against y_{t+k} for k in [-max_lag, max_lag].
/// A lag whose overlap has zero variance holds no value.
struct Correlogram {
  std::vector<int> lags;
  std::vector<std::optional<double>> values;

  std::optional<double> at(int lag) const;
  /// Lag of the largest defined value; nullopt if none is defined.
  std::optional<int> argmax() const;
};

/// Throws std::invalid_argument for unequal lengths, length <= max_lag,
/// negative max_lag or non-finite samples.
Correlogram cross_correlation(std::span<const double> x, std::span<const double> y, int max_lag);

}  // namespace urlab::xlab
