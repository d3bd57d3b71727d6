#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "urlab/trpo/networks.hpp"

namespace urlab::trpo {

struct TrpoConfig {
  double gamma = 0.995;
  double delta = 0.04;  // KL step size
  int cg_iters = 10;
  double cg_damping = 1e-5;
  double backtrack_ratio = 0.8;
  int max_backtracks = 10;
  int critic_epochs = 5;
  double critic_lr = 1e-3;
  int critic_minibatch = 64;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Flattened transitions of a batch of episodes; columns are time steps.
struct Batch {
  MatrixXd observations;
  MatrixXd actions;
  VectorXd rewards;
  std::vector<Eigen::Index> episode_starts;
  VectorXd returns;
  VectorXd values;
  VectorXd advantages;

  Eigen::Index size() const { return observations.cols(); }
};

/// Surrogate mean[exp(logpi_theta - old_logp) A] and its gradient.
std::pair<double, VectorXd> surrogate_and_grad(const PolicyNetwork& policy, const VectorXd& theta,
                                               const MatrixXd& obs, const MatrixXd& actions,
                                               const VectorXd& advantages, const VectorXd& old_logp);

/// Mean KL(old || pi_theta) over the batch and its gradient in theta.
std::pair<double, VectorXd> kl_and_grad(const PolicyNetwork& policy, const VectorXd& theta, const MatrixXd& obs,
                                        const MatrixXd& old_mean, const MatrixXd& old_std);

/// Fisher-vector products at fixed parameters: the Hessian of the mean KL
/// at old == new, evaluated analytically as J^T M J plus damping.
class FisherOperator {
 public:
  FisherOperator(const PolicyNetwork& policy, const VectorXd& theta, const MatrixXd& obs, double damping);

  VectorXd operator()(const VectorXd& v) const;

 private:
  const PolicyNetwork& policy_;
  const VectorXd& theta_;
  Mlp::Cache cache_;
  MatrixXd metric_;  // per output row and sample
  double damping_;
};

struct UpdateStats {
  bool accepted = false;
  double kl = 0.0;
  double surrogate_before = 0.0;
  double surrogate_after = 0.0;
  int backtracks = 0;
  double step_scale = 0.0;
  double grad_norm = 0.0;
  std::string diagnostic;
};

/// One KL-constrained natural-gradient step. On acceptance policy.theta is
/// replaced; otherwise it is left untouched.
UpdateStats trpo_update(PolicyNetwork& policy, const Batch& batch, const TrpoConfig& cfg);

}  // namespace urlab::trpo
