#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "urlab/harness/rig.hpp"
#include "urlab/trpo/agent.hpp"
#include "urlab/xlab/config.hpp"
#include "urlab/xlab/seeds.hpp"

namespace urlab::xlab {

/// Environment variable consulted for the default output directory.
inline constexpr const char* kOutDirEnv = "URLAB_OUT_DIR";

harness::RigConfig build_rig_config(const ExperimentConfig& cfg);
harness::RigStreams build_rig_streams(const SeedStreams& seeds);
std::unique_ptr<trpo::Agent> make_agent(const ExperimentConfig& cfg, const SeedStreams& seeds);

struct RunArtifacts {
  harness::RunResult result;
  std::unique_ptr<trpo::Agent> agent;
};

/// Runs one experiment with cfg.seed. Performs no file I/O.
RunArtifacts run_experiment(const ExperimentConfig& cfg);

struct OutputPaths {
  std::filesystem::path csv;
  std::filesystem::path metadata;
  std::filesystem::path ticks;      // empty unless tick logging is on
  std::filesystem::path arrivals;   // empty unless arrival logging is on
  std::filesystem::path checkpoint; // empty for agents without parameters
};

/// Files are named <name>_seed<seed>.<ext> inside `dir`.
OutputPaths write_outputs(const ExperimentConfig& cfg, const RunArtifacts& run, const std::filesystem::path& dir);

/// Explicit --out, else the config's output_dir, else $URLAB_OUT_DIR, else "results".
std::filesystem::path resolve_output_dir(const std::string& cli_out, const ExperimentConfig& cfg);

/// "3", "0..4" (inclusive) or "0,2,5".
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

}  // namespace urlab::xlab
