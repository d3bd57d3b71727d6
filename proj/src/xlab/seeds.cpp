#include "urlab/xlab/seeds.hpp"

#include <stdexcept>
#include <string>

namespace urlab::xlab {

SeedStreams derive_streams(std::uint64_t master_seed) {
  SeedStreams s;
  s.master = master_seed;
  s.policy = derive_seed(master_seed, "policy");
  s.targets = derive_seed(master_seed, "targets");
  s.medium = derive_seed(master_seed, "medium");
  s.injector = derive_seed(master_seed, "injector");
  s.exploration = derive_seed(master_seed, "exploration");
  s.critic = derive_seed(master_seed, "critic");
  s.controller = derive_seed(master_seed, "controller");
  return s;
}

Rng SeedStreams::stream(std::string_view label) const {
  if (label == "policy") return Rng(policy);
  if (label == "targets") return Rng(targets);
  if (label == "medium") return Rng(medium);
  if (label == "injector") return Rng(injector);
  if (label == "exploration") return Rng(exploration);
  if (label == "critic") return Rng(critic);
  if (label == "controller") return Rng(controller);
  throw std::invalid_argument("unknown seed stream '" + std::string(label) + "'");
}

}  // namespace urlab::xlab
