#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "urlab/harness/mailbox.hpp"
#include "urlab/linksim/channel.hpp"
#include "urlab/linksim/wire.hpp"
#include "urlab/reacher/action_space.hpp"
#include "urlab/reacher/safety.hpp"
#include "urlab/reacher/task.hpp"
#include "urlab/rng.hpp"
#include "urlab/timebase/scheduler.hpp"
#include "urlab/trpo/agent.hpp"
#include "urlab/ursim/controller.hpp"

namespace urlab::harness {

using namespace std::chrono_literals;

struct CycleConfig {
  Duration action_cycle = 40ms;
  Duration actuation_cycle = 8ms;
  Duration episode_length = 4s;
  int batch_episodes = 20;

  int steps_per_episode() const { return static_cast<int>(episode_length / action_cycle); }
  /// Throws std::invalid_argument for non-positive durations or an episode
  /// that is not a whole number of action cycles.
  void validate() const;
};

struct ResetConfig {
  double gain = 5.0;        // 1/s, proportional joint-speed gain
  double tolerance = 0.01;  // rad
  Duration timeout = 2s;   // flags a reset fault; driving continues
  Duration give_up = 10s;  // hard limit, after which the arm is stopped where it is
};

struct RigConfig {
  reacher::ReacherTask task = reacher::ReacherTask::two_joint();
  reacher::ActionSpace action_space = reacher::ActionSpace::Velocity;
  CycleConfig cycle;
  ursim::ControllerConfig controller;
  reacher::SafetyConfig safety;
  ResetConfig reset;
  linksim::DelayModel medium = linksim::WiredInterArrival{};  // status stream
  linksim::DelayModel action_delay = linksim::NoDelay{};      // agent -> environment
  linksim::DelayModel actuation_delay = linksim::NoDelay{};   // actuator -> controller
  timebase::ClockMode clock = timebase::ClockMode::Virtual;
  std::int64_t total_steps = 150000;

  bool record_ticks = false;      // per-tick controller log during episodes
  bool record_arrivals = false;   // status-packet arrival instants
  bool record_events = false;     // action/learn event log
  bool keep_episodes = false;     // full episode logs in the result

  void validate() const;
};

/// Independent random streams consumed inside the rig.
struct RigStreams {
  Rng targets;
  Rng medium;
  Rng action_injector;
  Rng actuation_injector;
  Rng controller_noise;
};

struct ActionTag {
  std::int64_t episode = -1;
  int step = -1;

  bool operator==(const ActionTag&) const = default;
};

/// Environment output consumed by the agent.
struct ObservationFrame {
  Eigen::VectorXd observation;
  double reward = 0.0;
  double distance = 0.0;
  Instant packet_time;
  std::int64_t episode = -1;
};

struct ActuatorSlot {
  ursim::ActuationCommand command;
  ActionTag tag;
};

struct TickRecord {
  Instant time;
  std::uint32_t seq = 0;
  double command = 0.0;  // commanded value in effect for the logged joint
  double q = 0.0;
  double qd = 0.0;
  double qdd_target = 0.0;
  double torque_target = 0.0;
  double current = 0.0;
};

enum class EventKind { EpisodeStart, ActionWrite, EpisodeEnd, LearnStart, LearnEnd };

std::string to_string(EventKind kind);

struct EventRecord {
  Instant time;
  EventKind kind;
  std::int64_t episode = -1;
  int step = -1;
};

struct TimingAudit {
  std::vector<double> obs_to_action_ms;  // per agent step, packet stamp to action write
  std::uint64_t actuator_sends = 0;
  std::uint64_t min_sends_per_action = 0;
  std::uint64_t max_sends_per_action = 0;
  std::uint64_t actions_applied = 0;
  std::uint64_t stale_actions = 0;
  std::uint64_t safety_overrides = 0;
  std::uint64_t reset_faults = 0;
  std::uint64_t controller_faults = 0;
  ursim::ControllerCounters controller;
  double max_box_excursion = 0.0;    // m, during episodes
  double max_joint_excursion = 0.0;  // rad, during episodes
  double reset_seconds = 0.0;
  double max_kl = 0.0;
  std::uint64_t updates_accepted = 0;
  std::uint64_t updates_rejected = 0;
  double max_lateness_ms = 0.0;
};

struct BatchStats {
  int batch = 0;
  std::int64_t steps = 0;  // cumulative agent steps at the end of the batch
  double mean_return = 0.0;
  double std_return = 0.0;
  double mean_final_distance = 0.0;
};

struct EpisodeSummary {
  std::int64_t index = 0;
  double total_return = 0.0;
  double final_distance = 0.0;
  int steps = 0;
};

struct RunResult {
  std::vector<BatchStats> batches;
  std::vector<EpisodeSummary> episodes;
  std::vector<trpo::EpisodeLog> episode_logs;
  std::vector<trpo::LearnStats> updates;
  TimingAudit audit;
  std::vector<TickRecord> ticks;
  std::vector<Instant> arrivals;
  std::vector<EventRecord> events;
  std::int64_t experience_steps = 0;
  double experience_seconds = 0.0;
  double simulated_seconds = 0.0;
};

/// Robot-communication process (sensor and actuator contexts, plus the
/// simulated controller behind its links) and RL process (environment and
/// agent contexts) wired together on one scheduler.
class Rig {
 public:
  Rig(RigConfig config, trpo::Agent& agent, RigStreams streams);

  /// Drives the arm back to the start posture. Returns false on timeout.
  bool reset_arm();

  /// Runs one episode with a fresh target and returns the agent-side log.
  trpo::EpisodeLog run_episode();

  /// Batches of episodes with a learning update after each batch, until the
  /// step budget is used up.
  RunResult run_experiment();

  const RigConfig& config() const { return config_; }
  Instant now() const { return scheduler_.now(); }
  const ursim::Controller& controller() const { return controller_; }
  ursim::Controller& controller() { return controller_; }
  const RunResult& result() const { return result_; }
  std::int64_t experience_steps() const { return result_.experience_steps; }

 private:
  enum class Mode { Idle, Resetting, Episode };
  static constexpr timebase::ContextId kSensor = 0, kActuator = 1, kEnvironment = 2, kAgent = 3,
                                       kController = 4;

  void pump_until(const std::function<bool()>& done);
  Instant next_grid_instant() const;

  void controller_tick();
  void actuator_send();
  void sensor_receive();
  void environment_on_packet();
  void environment_on_action(const Eigen::VectorXd& action, ActionTag tag);
  void environment_start_episode();
  void environment_end_episode();
  void agent_step();
  void close_send_count();

  void write_actuator(const ursim::ActuationCommand& cmd, ActionTag tag);
  void log_event(EventKind kind, int step = -1);

  RigConfig config_;
  trpo::Agent& agent_;
  RigStreams streams_;
  timebase::Scheduler scheduler_;
  ursim::Controller controller_;
  linksim::Channel<linksim::StatusBytes> status_link_;
  linksim::Channel<std::string> command_link_;
  linksim::Channel<std::pair<Eigen::VectorXd, ActionTag>> action_link_;

  Mailbox<ursim::StatusPacket> sensor_box_;
  Mailbox<ObservationFrame> observation_box_;
  Mailbox<ActuatorSlot> actuator_box_;

  Mode mode_ = Mode::Idle;
  std::int64_t episode_ = -1;
  int step_ = 0;
  int steps_per_episode_ = 0;
  bool episode_done_ = false;
  bool reset_done_ = false;
  bool reset_faulted_ = false;
  Instant reset_started_;
  Eigen::VectorXd target_;
  Eigen::VectorXd prev_action_;
  reacher::SmootherState smoother_;
  std::optional<ursim::ActuationCommand> intended_;
  ActionTag intended_tag_;
  trpo::EpisodeLog log_;
  ActionTag send_tag_;
  std::uint64_t send_count_ = 0;
  bool send_count_seen_ = false;
  int logged_joint_ = 0;

  RunResult result_;
};

}  // namespace urlab::harness
