#include "urlab/trpo/critic.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace urlab::trpo {

double critic_loss(const CriticNetwork& critic, const MatrixXd& obs, const VectorXd& returns) {
  return (critic.predict(obs) - returns).squaredNorm() / static_cast<double>(returns.size());
}

CriticFitStats critic_fit(CriticNetwork& critic, const MatrixXd& obs, const VectorXd& returns,
                          const TrpoConfig& cfg, Rng& shuffle_rng, AdamState& adam) {
  if (obs.cols() == 0 || obs.cols() != returns.size()) {
    throw std::invalid_argument("critic_fit: batch must be non-empty with one return per observation");
  }
  CriticFitStats stats;
  stats.loss_before = critic_loss(critic, obs, returns);
  stats.loss_after = stats.loss_before;
  if (cfg.critic_epochs == 0) return stats;
  if (!std::isfinite(stats.loss_before)) {
    stats.diagnostic = "non-finite critic loss";
    return stats;
  }
  if (adam.m.size() != critic.phi.size()) {
    adam.m = VectorXd::Zero(critic.phi.size());
    adam.v = VectorXd::Zero(critic.phi.size());
    adam.steps = 0;
  }
  const VectorXd phi_before = critic.phi;
  const AdamState adam_before = adam;
  const Eigen::Index n = obs.cols();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (int epoch = 0; epoch < cfg.critic_epochs; ++epoch) {
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[shuffle_rng.index(i)]);
    for (Eigen::Index start = 0; start < n; start += cfg.critic_minibatch) {
      const Eigen::Index m = std::min<Eigen::Index>(cfg.critic_minibatch, n - start);
      MatrixXd x(obs.rows(), m);
      VectorXd y(m);
      for (Eigen::Index k = 0; k < m; ++k) {
        x.col(k) = obs.col(order[static_cast<std::size_t>(start + k)]);
        y[k] = returns[order[static_cast<std::size_t>(start + k)]];
      }
      Mlp::Cache cache;
      const MatrixXd pred = critic.mlp().forward(critic.phi, x, &cache);
      const MatrixXd d_out = (2.0 / static_cast<double>(m)) * (pred.row(0) - y.transpose());
      const VectorXd g = critic.mlp().backward(critic.phi, cache, d_out);
      ++adam.steps;
      adam.m = adam.beta1 * adam.m + (1.0 - adam.beta1) * g;
      adam.v = adam.beta2 * adam.v + (1.0 - adam.beta2) * g.cwiseAbs2();
      const double c1 = 1.0 - std::pow(adam.beta1, static_cast<double>(adam.steps));
      const double c2 = 1.0 - std::pow(adam.beta2, static_cast<double>(adam.steps));
      critic.phi.array() -= cfg.critic_lr * (adam.m.array() / c1) / ((adam.v.array() / c2).sqrt() + adam.eps);
    }
  }
  stats.loss_after = critic_loss(critic, obs, returns);
  if (!std::isfinite(stats.loss_after) || !critic.phi.allFinite()) {
    critic.phi = phi_before;
    adam = adam_before;
    stats.loss_after = stats.loss_before;
    stats.diagnostic = "non-finite critic loss";
    return stats;
  }
  stats.applied = true;
  return stats;
}

}  // namespace urlab::trpo
