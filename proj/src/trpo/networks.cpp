#include "urlab/trpo/networks.hpp"

#include <stdexcept>

namespace urlab::trpo {
namespace {

std::vector<int> layer_sizes(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> sizes{in};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(out);
  return sizes;
}

}  // namespace

PolicyNetwork::PolicyNetwork(int obs_dim, int act_dim, std::vector<int> hidden)
    : mlp_(layer_sizes(obs_dim, hidden, 2 * act_dim)), act_dim_(act_dim) {
  theta = VectorXd::Zero(mlp_.num_params());
}

PolicyOutput PolicyNetwork::evaluate(const VectorXd& th, const MatrixXd& obs, Mlp::Cache* cache) const {
  const MatrixXd out = mlp_.forward(th, obs, cache);
  PolicyOutput r;
  r.mean = out.topRows(act_dim_);
  const Eigen::ArrayXXd raw = out.bottomRows(act_dim_).array();
  r.log_std_free = ((raw >= kLogStdMin) && (raw <= kLogStdMax)).cast<double>();
  r.std = raw.max(kLogStdMin).min(kLogStdMax).exp().matrix();
  return r;
}

std::pair<VectorXd, VectorXd> PolicyNetwork::forward(const VectorXd& obs) const {
  if (obs.size() != obs_dim()) throw std::invalid_argument("observation has the wrong dimension");
  PolicyOutput r = evaluate(theta, obs);
  return {r.mean.col(0), r.std.col(0)};
}

void PolicyNetwork::initialize(Rng& rng) { theta = mlp_.orthogonal_init(rng, 1.0, 0.01); }

CriticNetwork::CriticNetwork(int obs_dim, std::vector<int> hidden) : mlp_(layer_sizes(obs_dim, hidden, 1)) {
  phi = VectorXd::Zero(mlp_.num_params());
}

VectorXd CriticNetwork::predict(const MatrixXd& obs) const { return mlp_.forward(phi, obs).row(0).transpose(); }

void CriticNetwork::initialize(Rng& rng) { phi = mlp_.orthogonal_init(rng, 1.0, 1.0); }

}  // namespace urlab::trpo
