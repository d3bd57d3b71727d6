#include "urlab/trpo/agent.hpp"

#include <numeric>
#include <stdexcept>

#include "urlab/trpo/gaussian.hpp"
#include "urlab/trpo/returns.hpp"

namespace urlab::trpo {

double EpisodeLog::total_return() const { return std::accumulate(rewards.begin(), rewards.end(), 0.0); }

Batch make_batch(const std::vector<EpisodeLog>& episodes, double gamma) {
  Batch b;
  Eigen::Index total = 0;
  for (const auto& ep : episodes) {
    if (ep.observations.size() != ep.actions.size() || ep.rewards.size() != ep.actions.size()) {
      throw std::invalid_argument("episode log has inconsistent lengths");
    }
    total += static_cast<Eigen::Index>(ep.steps());
  }
  if (total == 0) return b;
  const Eigen::Index obs_dim = episodes.front().observations.front().size();
  const Eigen::Index act_dim = episodes.front().actions.front().size();
  b.observations.resize(obs_dim, total);
  b.actions.resize(act_dim, total);
  b.rewards.resize(total);
  b.returns.resize(total);
  Eigen::Index col = 0;
  for (const auto& ep : episodes) {
    if (ep.steps() == 0) continue;
    b.episode_starts.push_back(col);
    const Eigen::VectorXd g = compute_returns(ep.rewards, gamma);
    for (std::size_t t = 0; t < ep.steps(); ++t, ++col) {
      b.observations.col(col) = ep.observations[t];
      b.actions.col(col) = ep.actions[t];
      b.rewards[col] = ep.rewards[t];
      b.returns[col] = g[static_cast<Eigen::Index>(t)];
    }
  }
  return b;
}

TrpoAgent::TrpoAgent(int obs_dim, int act_dim, TrpoConfig cfg, Rng init_rng, Rng exploration_rng, Rng critic_rng)
    : cfg_(cfg),
      policy_(obs_dim, act_dim),
      critic_(obs_dim),
      exploration_(std::move(exploration_rng)),
      critic_rng_(std::move(critic_rng)) {
  cfg_.validate();
  policy_.initialize(init_rng);
  critic_.initialize(init_rng);
}

VectorXd TrpoAgent::act(const VectorXd& observation) {
  const auto [mean, std] = policy_.forward(observation);
  return sample_action(mean, std, exploration_);
}

std::optional<LearnStats> TrpoAgent::learn(const std::vector<EpisodeLog>& episodes) {
  Batch batch = make_batch(episodes, cfg_.gamma);
  if (batch.size() == 0) return std::nullopt;
  batch.values = critic_.predict(batch.observations);
  batch.advantages = compute_advantages(batch.returns, batch.values);
  LearnStats stats;
  stats.policy = trpo_update(policy_, batch, cfg_);
  stats.critic = critic_fit(critic_, batch.observations, batch.returns, cfg_, critic_rng_, adam_);
  return stats;
}

VectorXd RandomAgent::act(const VectorXd&) {
  VectorXd a(act_dim_);
  for (int i = 0; i < act_dim_; ++i) a[i] = rng_.normal();
  return a;
}

}  // namespace urlab::trpo
