#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "urlab/harness/rig.hpp"
#include "urlab/linksim/delay.hpp"
#include "urlab/reacher/action_space.hpp"
#include "urlab/reacher/safety.hpp"
#include "urlab/reacher/task.hpp"
#include "urlab/timebase/scheduler.hpp"
#include "urlab/trpo/trpo.hpp"
#include "urlab/ursim/controller.hpp"

namespace urlab::xlab {

using timebase::Duration;

/// Bad configuration input; key() names the offending entry (dotted path).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

enum class MediumKind { Wired, Wireless, Ideal };
enum class AgentKind { Trpo, Random };

std::string to_string(MediumKind m);
std::string to_string(AgentKind a);

struct LoggingConfig {
  bool ticks = false;
  bool arrivals = false;
  bool events = false;
};

struct ExperimentConfig {
  std::string name = "baseline";
  reacher::ActionSpace action_space = reacher::ActionSpace::Velocity;
  Duration action_cycle = std::chrono::milliseconds(40);
  Duration episode_length = std::chrono::seconds(4);
  int batch_episodes = 20;
  MediumKind medium = MediumKind::Wired;
  Duration action_delay = Duration::zero();     // exponential mean; zero = no injector
  Duration actuation_delay = Duration::zero();  // exponential mean; zero = no injector
  timebase::ClockMode clock = timebase::ClockMode::Virtual;
  std::uint64_t seed = 0;
  std::int64_t total_steps = 150000;
  AgentKind agent = AgentKind::Trpo;
  std::string output_dir;  // empty: caller decides

  reacher::ReacherTask task = reacher::ReacherTask::two_joint();
  trpo::TrpoConfig trpo;
  ursim::ControllerConfig controller;
  linksim::WiredInterArrival wired;
  linksim::WirelessLognormal wireless;
  reacher::SafetyConfig safety;
  harness::ResetConfig reset;
  LoggingConfig logging;

  /// Throws ConfigError naming the first offending key.
  void validate() const;
};

/// Configs compare equal when their canonical TOML renderings match.
bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

/// Parses TOML text. Missing keys keep baseline defaults; unknown keys, type
/// errors and constraint violations throw ConfigError.
ExperimentConfig parse_config(const std::string& toml_text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical TOML rendering with every key present.
std::string dump_config(const ExperimentConfig& cfg);

/// Canonical JSON rendering (same keys and nesting as the TOML form).
std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& json_text);

}  // namespace urlab::xlab
