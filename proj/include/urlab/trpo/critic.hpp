#pragma once

#include <string>

#include "urlab/rng.hpp"
#include "urlab/trpo/networks.hpp"
#include "urlab/trpo/trpo.hpp"

namespace urlab::trpo {

struct AdamState {
  VectorXd m;
  VectorXd v;
  long steps = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct CriticFitStats {
  double loss_before = 0.0;
  double loss_after = 0.0;
  bool applied = false;
  std::string diagnostic;
};

/// Mean squared error of the critic against `returns`.
double critic_loss(const CriticNetwork& critic, const MatrixXd& obs, const VectorXd& returns);

/// Regresses V(obs) onto `returns` with cfg.critic_epochs shuffled passes of
/// Adam minibatch steps. A non-finite loss restores the original parameters.
CriticFitStats critic_fit(CriticNetwork& critic, const MatrixXd& obs, const VectorXd& returns,
                          const TrpoConfig& cfg, Rng& shuffle_rng, AdamState& adam);

}  // namespace urlab::trpo
