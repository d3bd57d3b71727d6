#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "urlab/trpo/mlp.hpp"

namespace urlab::trpo {

inline constexpr double kLogStdMin = -5.0;
inline constexpr double kLogStdMax = 2.0;

/// Gaussian policy head evaluated on a batch (columns are samples).
struct PolicyOutput {
  MatrixXd mean;
  MatrixXd std;
  Eigen::ArrayXXd log_std_free;  // 1 where the log-std head is inside its clamp, else 0
};

/// MLP whose output stacks the action mean and the raw log-std.
class PolicyNetwork {
 public:
  PolicyNetwork(int obs_dim, int act_dim, std::vector<int> hidden = {64, 64});

  int obs_dim() const { return mlp_.input_dim(); }
  int act_dim() const { return act_dim_; }
  const Mlp& mlp() const { return mlp_; }

  PolicyOutput evaluate(const VectorXd& theta, const MatrixXd& obs, Mlp::Cache* cache = nullptr) const;

  /// Single observation with the current parameters.
  std::pair<VectorXd, VectorXd> forward(const VectorXd& obs) const;

  /// Orthogonal hidden layers; a small output gain so the initial mean is
  /// near zero and the initial std near one.
  void initialize(Rng& rng);

  VectorXd theta;

 private:
  Mlp mlp_;
  int act_dim_;
};

class CriticNetwork {
 public:
  CriticNetwork(int obs_dim, std::vector<int> hidden = {64, 64});

  const Mlp& mlp() const { return mlp_; }
  VectorXd predict(const MatrixXd& obs) const;
  void initialize(Rng& rng);

  VectorXd phi;

 private:
  Mlp mlp_;
};

}  // namespace urlab::trpo
