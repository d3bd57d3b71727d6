#include "urlab/trpo/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace urlab::trpo {
namespace {

const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

void require_positive(const Eigen::ArrayXXd& std) {
  if (!(std > 0.0).all()) throw std::invalid_argument("standard deviations must be positive");
}

}  // namespace

double log_prob(const Eigen::VectorXd& mean, const Eigen::VectorXd& std, const Eigen::VectorXd& action) {
  return log_prob_batch(mean, std, action)[0];
}

Eigen::VectorXd log_prob_batch(const Eigen::MatrixXd& mean, const Eigen::MatrixXd& std,
                               const Eigen::MatrixXd& actions) {
  if (mean.rows() != std.rows() || mean.rows() != actions.rows() || mean.cols() != actions.cols() ||
      std.cols() != mean.cols()) {
    throw std::invalid_argument("log_prob: shape mismatch");
  }
  require_positive(std.array());
  const Eigen::ArrayXXd z = (actions - mean).array() / std.array();
  const Eigen::ArrayXXd per_dim = -0.5 * z.square() - std.array().log() - kHalfLog2Pi;
  return per_dim.colwise().sum().transpose();
}

double gaussian_kl(const Eigen::VectorXd& old_mean, const Eigen::VectorXd& old_std, const Eigen::VectorXd& new_mean,
                   const Eigen::VectorXd& new_std) {
  return mean_kl(old_mean, old_std, new_mean, new_std);
}

double mean_kl(const Eigen::MatrixXd& old_mean, const Eigen::MatrixXd& old_std, const Eigen::MatrixXd& new_mean,
               const Eigen::MatrixXd& new_std) {
  if (old_mean.rows() != new_mean.rows() || old_mean.cols() != new_mean.cols() || old_std.rows() != old_mean.rows() ||
      new_std.rows() != new_mean.rows() || old_std.cols() != old_mean.cols() || new_std.cols() != new_mean.cols()) {
    throw std::invalid_argument("gaussian_kl: shape mismatch");
  }
  require_positive(old_std.array());
  require_positive(new_std.array());
  const Eigen::ArrayXXd so = old_std.array(), sn = new_std.array();
  const Eigen::ArrayXXd kl =
      (sn / so).log() + (so.square() + (old_mean - new_mean).array().square()) / (2.0 * sn.square()) - 0.5;
  return kl.sum() / static_cast<double>(old_mean.cols());
}

Eigen::VectorXd sample_action(const Eigen::VectorXd& mean, const Eigen::VectorXd& std, Rng& rng) {
  require_positive(std.array());
  Eigen::VectorXd a(mean.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) a[i] = mean[i] + std[i] * rng.normal();
  return a;
}

}  // namespace urlab::trpo
