#include "urlab/trpo/trpo.hpp"

#include <cmath>
#include <stdexcept>

#include "urlab/trpo/cg.hpp"
#include "urlab/trpo/gaussian.hpp"

namespace urlab::trpo {

void TrpoConfig::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("trpo.gamma must lie in (0, 1]");
  if (!(delta > 0.0)) throw std::invalid_argument("trpo.delta must be positive");
  if (cg_iters <= 0) throw std::invalid_argument("trpo.cg_iters must be positive");
  if (!(cg_damping >= 0.0)) throw std::invalid_argument("trpo.cg_damping must be non-negative");
  if (!(backtrack_ratio > 0.0 && backtrack_ratio < 1.0)) {
    throw std::invalid_argument("trpo.backtrack_ratio must lie in (0, 1)");
  }
  if (max_backtracks <= 0) throw std::invalid_argument("trpo.max_backtracks must be positive");
  if (critic_epochs < 0) throw std::invalid_argument("trpo.critic_epochs must be non-negative");
  if (!(critic_lr > 0.0)) throw std::invalid_argument("trpo.critic_lr must be positive");
  if (critic_minibatch <= 0) throw std::invalid_argument("trpo.critic_minibatch must be positive");
}

std::pair<double, VectorXd> surrogate_and_grad(const PolicyNetwork& policy, const VectorXd& theta,
                                               const MatrixXd& obs, const MatrixXd& actions,
                                               const VectorXd& advantages, const VectorXd& old_logp) {
  Mlp::Cache cache;
  const PolicyOutput out = policy.evaluate(theta, obs, &cache);
  const VectorXd logp = log_prob_batch(out.mean, out.std, actions);
  const double n = static_cast<double>(obs.cols());
  const Eigen::ArrayXd weight = (logp - old_logp).array().exp() * advantages.array();
  const double value = weight.sum() / n;

  const Eigen::ArrayXXd z = (actions - out.mean).array() / out.std.array();
  const Eigen::RowVectorXd w = weight.matrix().transpose() / n;
  MatrixXd d_out(2 * policy.act_dim(), obs.cols());
  d_out.topRows(policy.act_dim()) = (z / out.std.array()).matrix() * w.asDiagonal();
  d_out.bottomRows(policy.act_dim()) = ((z.square() - 1.0) * out.log_std_free).matrix() * w.asDiagonal();
  return {value, policy.mlp().backward(theta, cache, d_out)};
}

std::pair<double, VectorXd> kl_and_grad(const PolicyNetwork& policy, const VectorXd& theta, const MatrixXd& obs,
                                        const MatrixXd& old_mean, const MatrixXd& old_std) {
  Mlp::Cache cache;
  const PolicyOutput out = policy.evaluate(theta, obs, &cache);
  const double value = mean_kl(old_mean, old_std, out.mean, out.std);
  const double n = static_cast<double>(obs.cols());
  const Eigen::ArrayXXd var_new = out.std.array().square();
  const Eigen::ArrayXXd spread = old_std.array().square() + (old_mean - out.mean).array().square();
  MatrixXd d_out(2 * policy.act_dim(), obs.cols());
  d_out.topRows(policy.act_dim()) = ((out.mean - old_mean).array() / var_new / n).matrix();
  d_out.bottomRows(policy.act_dim()) = ((1.0 - spread / var_new) * out.log_std_free / n).matrix();
  return {value, policy.mlp().backward(theta, cache, d_out)};
}

FisherOperator::FisherOperator(const PolicyNetwork& policy, const VectorXd& theta, const MatrixXd& obs,
                               double damping)
    : policy_(policy), theta_(theta), damping_(damping) {
  const PolicyOutput out = policy.evaluate(theta, obs, &cache_);
  const double n = static_cast<double>(obs.cols());
  metric_.resize(2 * policy.act_dim(), obs.cols());
  metric_.topRows(policy.act_dim()) = (out.std.array().square().inverse() / n).matrix();
  metric_.bottomRows(policy.act_dim()) = (2.0 * out.log_std_free / n).matrix();
}

VectorXd FisherOperator::operator()(const VectorXd& v) const {
  const MatrixXd jv = policy_.mlp().jvp(theta_, cache_, v);
  const MatrixXd weighted = jv.cwiseProduct(metric_);
  return policy_.mlp().backward(theta_, cache_, weighted) + damping_ * v;
}

UpdateStats trpo_update(PolicyNetwork& policy, const Batch& batch, const TrpoConfig& cfg) {
  UpdateStats stats;
  if (batch.size() == 0) {
    stats.diagnostic = "empty batch";
    return stats;
  }
  if (batch.advantages.size() != batch.size() || batch.actions.cols() != batch.size()) {
    throw std::invalid_argument("trpo_update: batch is incomplete");
  }
  const VectorXd theta_old = policy.theta;
  const PolicyOutput old = policy.evaluate(theta_old, batch.observations);
  const VectorXd old_logp = log_prob_batch(old.mean, old.std, batch.actions);

  auto [surr0, g] = surrogate_and_grad(policy, theta_old, batch.observations, batch.actions, batch.advantages, old_logp);
  stats.surrogate_before = surr0;
  stats.surrogate_after = surr0;
  stats.grad_norm = g.norm();
  if (!g.allFinite()) {
    stats.diagnostic = "non-finite policy gradient";
    return stats;
  }
  if (stats.grad_norm == 0.0) {
    stats.diagnostic = "zero policy gradient";
    return stats;
  }

  const FisherOperator fvp(policy, theta_old, batch.observations, cfg.cg_damping);
  VectorXd step;
  try {
    step = conjugate_gradient(fvp, g, cfg.cg_iters);
  } catch (const std::runtime_error& e) {
    stats.diagnostic = e.what();
    return stats;
  }
  const double shs = step.dot(fvp(step));
  if (!(shs > 0.0) || !std::isfinite(shs)) {
    stats.diagnostic = "non-positive curvature along the search direction";
    return stats;
  }
  const double beta = std::sqrt(2.0 * cfg.delta / shs);

  double scale = 1.0;
  for (int i = 0; i < cfg.max_backtracks; ++i, scale *= cfg.backtrack_ratio) {
    const VectorXd candidate = theta_old + scale * beta * step;
    const PolicyOutput out = policy.evaluate(candidate, batch.observations);
    const double kl = mean_kl(old.mean, old.std, out.mean, out.std);
    const VectorXd logp = log_prob_batch(out.mean, out.std, batch.actions);
    const double surr = ((logp - old_logp).array().exp() * batch.advantages.array()).mean();
    if (std::isfinite(kl) && std::isfinite(surr) && kl <= cfg.delta && surr - surr0 > 0.0) {
      policy.theta = candidate;
      stats.accepted = true;
      stats.kl = kl;
      stats.surrogate_after = surr;
      stats.backtracks = i;
      stats.step_scale = scale * beta;
      return stats;
    }
  }
  stats.backtracks = cfg.max_backtracks;
  stats.diagnostic = "line search found no acceptable step";
  return stats;
}

}  // namespace urlab::trpo
