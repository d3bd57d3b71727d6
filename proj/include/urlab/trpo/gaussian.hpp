#pragma once

#include <Eigen/Core>

#include "urlab/rng.hpp"

namespace urlab::trpo {

/// Diagonal Gaussian log density.
double log_prob(const Eigen::VectorXd& mean, const Eigen::VectorXd& std, const Eigen::VectorXd& action);

/// KL(old || new) summed over dimensions for one diagonal Gaussian pair.
double gaussian_kl(const Eigen::VectorXd& old_mean, const Eigen::VectorXd& old_std, const Eigen::VectorXd& new_mean,
                   const Eigen::VectorXd& new_std);

/// Column-wise log densities; columns are samples.
Eigen::VectorXd log_prob_batch(const Eigen::MatrixXd& mean, const Eigen::MatrixXd& std,
                               const Eigen::MatrixXd& actions);

/// KL(old || new) averaged over columns.
double mean_kl(const Eigen::MatrixXd& old_mean, const Eigen::MatrixXd& old_std, const Eigen::MatrixXd& new_mean,
               const Eigen::MatrixXd& new_std);

/// mean + std * N(0, I).
Eigen::VectorXd sample_action(const Eigen::VectorXd& mean, const Eigen::VectorXd& std, Rng& rng);

}  // namespace urlab::trpo
