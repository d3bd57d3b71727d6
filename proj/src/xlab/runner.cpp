#include "urlab/xlab/runner.hpp"

#include <cstdlib>
#include <stdexcept>

#include "urlab/trpo/checkpoint.hpp"
#include "urlab/xlab/output.hpp"

namespace urlab::xlab {

harness::RigConfig build_rig_config(const ExperimentConfig& cfg) {
  cfg.validate();
  harness::RigConfig r;
  r.task = cfg.task;
  r.action_space = cfg.action_space;
  r.cycle.action_cycle = cfg.action_cycle;
  r.cycle.actuation_cycle = cfg.controller.tick;
  r.cycle.episode_length = cfg.episode_length;
  r.cycle.batch_episodes = cfg.batch_episodes;
  r.controller = cfg.controller;
  r.safety = cfg.safety;
  r.safety.tick = cfg.controller.tick;
  r.reset = cfg.reset;
  switch (cfg.medium) {
    case MediumKind::Wired: r.medium = cfg.wired; break;
    case MediumKind::Wireless: r.medium = cfg.wireless; break;
    case MediumKind::Ideal: r.medium = linksim::NoDelay{}; break;
  }
  r.action_delay = cfg.action_delay > Duration::zero() ? linksim::DelayModel{linksim::ExponentialInjector{cfg.action_delay}}
                                                       : linksim::DelayModel{linksim::NoDelay{}};
  r.actuation_delay = cfg.actuation_delay > Duration::zero()
                          ? linksim::DelayModel{linksim::ExponentialInjector{cfg.actuation_delay}}
                          : linksim::DelayModel{linksim::NoDelay{}};
  r.clock = cfg.clock;
  r.total_steps = cfg.total_steps;
  r.record_ticks = cfg.logging.ticks;
  r.record_arrivals = cfg.logging.arrivals;
  r.record_events = cfg.logging.events;
  return r;
}

harness::RigStreams build_rig_streams(const SeedStreams& seeds) {
  return {Rng(seeds.targets), Rng(seeds.medium), Rng(derive_seed(seeds.injector, "action")),
          Rng(derive_seed(seeds.injector, "actuation")), Rng(seeds.controller)};
}

std::unique_ptr<trpo::Agent> make_agent(const ExperimentConfig& cfg, const SeedStreams& seeds) {
  const int obs_dim = cfg.task.observation_dim();
  const int act_dim = cfg.task.action_dim();
  if (cfg.agent == AgentKind::Random) return std::make_unique<trpo::RandomAgent>(act_dim, Rng(seeds.exploration));
  return std::make_unique<trpo::TrpoAgent>(obs_dim, act_dim, cfg.trpo, Rng(seeds.policy), Rng(seeds.exploration),
                                           Rng(seeds.critic));
}

RunArtifacts run_experiment(const ExperimentConfig& cfg) {
  const SeedStreams seeds = derive_streams(cfg.seed);
  RunArtifacts out;
  out.agent = make_agent(cfg, seeds);
  harness::Rig rig(build_rig_config(cfg), *out.agent, build_rig_streams(seeds));
  out.result = rig.run_experiment();
  return out;
}

OutputPaths write_outputs(const ExperimentConfig& cfg, const RunArtifacts& run, const std::filesystem::path& dir) {
  const std::string stem = cfg.name + "_seed" + std::to_string(cfg.seed);
  OutputPaths p;
  p.csv = dir / (stem + ".csv");
  p.metadata = dir / (stem + ".json");
  write_run_csv(run.result.batches, p.csv);
  write_metadata(cfg, run.result, p.metadata);
  if (cfg.logging.ticks) {
    p.ticks = dir / (stem + ".ticks.csv");
    write_tick_log(run.result.ticks, p.ticks);
  }
  if (cfg.logging.arrivals) {
    p.arrivals = dir / (stem + ".arrivals.csv");
    write_arrival_log(run.result.arrivals, p.arrivals);
  }
  if (const auto* trpo_agent = dynamic_cast<const trpo::TrpoAgent*>(run.agent.get())) {
    p.checkpoint = dir / (stem + ".policy.bin");
    trpo::save_checkpoint(p.checkpoint, {trpo_agent->policy().mlp().sizes(), trpo_agent->policy().theta});
  }
  return p;
}

std::filesystem::path resolve_output_dir(const std::string& cli_out, const ExperimentConfig& cfg) {
  if (!cli_out.empty()) return cli_out;
  if (!cfg.output_dir.empty()) return cfg.output_dir;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return "results";
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  const auto number = [&](const std::string& s) -> std::uint64_t {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      throw std::invalid_argument("bad seed '" + s + "' in '" + text + "'");
    }
    return std::stoull(s);
  };
  std::vector<std::uint64_t> seeds;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const std::uint64_t lo = number(text.substr(0, dots)), hi = number(text.substr(dots + 2));
    if (hi < lo) throw std::invalid_argument("empty seed range '" + text + "'");
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
  }
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    seeds.push_back(number(text.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return seeds;
}

}  // namespace urlab::xlab
