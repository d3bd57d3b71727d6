#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "urlab/rng.hpp"
#include "urlab/trpo/critic.hpp"
#include "urlab/trpo/networks.hpp"
#include "urlab/trpo/trpo.hpp"

namespace urlab::trpo {

/// Agent-side record of one episode. rewards[t] is the reward that followed
/// actions[t]; the final observation is kept separately.
struct EpisodeLog {
  std::vector<VectorXd> observations;
  std::vector<VectorXd> actions;
  std::vector<double> rewards;
  std::vector<double> observation_age_ms;  // age of the packet behind each observation
  double final_distance = 0.0;

  std::size_t steps() const { return actions.size(); }
  double total_return() const;
};

/// Stacks episodes and fills discounted per-episode returns.
Batch make_batch(const std::vector<EpisodeLog>& episodes, double gamma);

struct LearnStats {
  UpdateStats policy;
  CriticFitStats critic;
};

class Agent {
 public:
  virtual ~Agent() = default;
  virtual VectorXd act(const VectorXd& observation) = 0;
  /// Called between episodes once a batch is complete.
  virtual std::optional<LearnStats> learn(const std::vector<EpisodeLog>& batch) = 0;
  virtual std::string name() const = 0;
};

class TrpoAgent : public Agent {
 public:
  /// `init_rng` initializes both networks (policy first); `exploration_rng`
  /// samples actions; `critic_rng` shuffles critic minibatches.
  TrpoAgent(int obs_dim, int act_dim, TrpoConfig cfg, Rng init_rng, Rng exploration_rng, Rng critic_rng);

  VectorXd act(const VectorXd& observation) override;
  std::optional<LearnStats> learn(const std::vector<EpisodeLog>& batch) override;
  std::string name() const override { return "trpo"; }

  const PolicyNetwork& policy() const { return policy_; }
  PolicyNetwork& policy() { return policy_; }
  const CriticNetwork& critic() const { return critic_; }
  CriticNetwork& critic() { return critic_; }

 private:
  TrpoConfig cfg_;
  PolicyNetwork policy_;
  CriticNetwork critic_;
  Rng exploration_;
  Rng critic_rng_;
  AdamState adam_;
};

/// Standard-normal actions, no learning.
class RandomAgent : public Agent {
 public:
  RandomAgent(int act_dim, Rng exploration_rng) : act_dim_(act_dim), rng_(std::move(exploration_rng)) {}

  VectorXd act(const VectorXd& observation) override;
  std::optional<LearnStats> learn(const std::vector<EpisodeLog>&) override { return std::nullopt; }
  std::string name() const override { return "random"; }

 private:
  int act_dim_;
  Rng rng_;
};

}  // namespace urlab::trpo
