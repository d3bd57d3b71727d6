#include "urlab/trpo/returns.hpp"

#include <cmath>
#include <stdexcept>

namespace urlab::trpo {

Eigen::VectorXd compute_returns(std::span<const double> rewards, double gamma) {
  Eigen::VectorXd g(static_cast<Eigen::Index>(rewards.size()));
  double acc = 0.0;
  for (std::size_t i = rewards.size(); i-- > 0;) {
    if (!std::isfinite(rewards[i])) throw std::invalid_argument("reward is not finite");
    acc = rewards[i] + gamma * acc;
    g[static_cast<Eigen::Index>(i)] = acc;
  }
  return g;
}

Eigen::VectorXd compute_advantages(const Eigen::VectorXd& returns, const Eigen::VectorXd& values, double eps) {
  if (returns.size() != values.size()) throw std::invalid_argument("returns and values differ in length");
  Eigen::VectorXd a = returns - values;
  if (a.size() == 0) return a;
  const double mean = a.mean();
  a.array() -= mean;
  const double sd = std::sqrt(a.squaredNorm() / static_cast<double>(a.size()));
  if (sd < eps) return Eigen::VectorXd::Zero(a.size());
  return a / (sd + eps);
}

}  // namespace urlab::trpo
