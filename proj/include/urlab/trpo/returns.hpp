#pragma once

#include <span>

#include <Eigen/Core>

namespace urlab::trpo {

/// Discounted returns of one episode: G_t = R_{t+1} + gamma G_{t+1}, where
/// rewards[t] holds R_{t+1}.
Eigen::VectorXd compute_returns(std::span<const double> rewards, double gamma);

/// A = G - V, standardized over the batch. A constant difference gives zeros.
Eigen::VectorXd compute_advantages(const Eigen::VectorXd& returns, const Eigen::VectorXd& values,
                                   double eps = 1e-8);

}  // namespace urlab::trpo
