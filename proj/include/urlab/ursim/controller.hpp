#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "urlab/rng.hpp"
#include "urlab/ursim/types.hpp"

namespace urlab::ursim {

struct ControllerConfig {
  Duration tick = std::chrono::milliseconds(8);
  int accel_lag = 2;    // ticks from command to realized / reported acceleration
  int current_lag = 3;  // ticks from command to measured current
  double inertia_scale = 1.0;
  double current_gain = 1.0;    // c1
  double friction_gain = 0.5;   // c2
  double current_noise = 0.01;  // sigma_c
  double angle_limit = kHardwareAngleLimit;
  double speed_limit = kHardwareSpeedLimit;
  double default_accel = 1.4;
  // A command that lands between tick boundaries while a motion command is
  // running aborts it: the boundary tick brakes, the new command starts on
  // the following tick. Commands that land exactly on a boundary take over
  // seamlessly.
  bool preempt_on_async_arrival = true;

  void validate() const;
};

struct ControllerCounters {
  std::uint64_t ticks = 0;
  std::uint64_t commands_received = 0;
  std::uint64_t dropped = 0;
  std::uint64_t expired_ticks = 0;
  std::uint64_t preempted_ticks = 0;
  std::uint64_t faults = 0;
};

/// Scales `desired` so that its largest component magnitude is at most a_max.
Vec6 leading_axis_scale(const Vec6& desired, double a_max);

/// Kinematic six-joint arm behind a URControl-style command interface.
///
/// Every tick: pick up the newest command that has arrived, compute a desired
/// acceleration from it, push it through the actuation pipeline, integrate
/// with semi-implicit Euler and emit a status packet. Desired accelerations
/// are planned against the state the arm will have once the accelerations
/// already queued in the pipeline are realized.
class Controller {
 public:
  explicit Controller(ControllerConfig config = {}, std::uint64_t noise_seed = 0);

  /// Queues `cmd`; it becomes active at the first tick boundary at or after
  /// `arrival`. Non-finite commands throw. A ServoJ target outside the
  /// hardware range is rejected and raises the fault flag instead.
  void apply_command(const ActuationCommand& cmd, Instant arrival);

  /// Advances one tick and returns the packet stamped with the tick instant.
  StatusPacket tick();

  /// Instant of the tick the next call to tick() will produce.
  Instant next_tick_at() const;

  /// Replaces the joint state, flushes the pipeline and clears commands.
  void set_joint_state(const Vec6& q, const Vec6& qd);

  const JointState& state() const { return state_; }
  const std::optional<ActuationCommand>& active_command() const { return active_; }
  const ControllerCounters& counters() const { return counters_; }
  const ControllerConfig& config() const { return config_; }

  bool fault() const { return fault_; }
  void clear_fault() { fault_ = false; }

  /// Values of the command that governed the most recent tick (zeros when
  /// braking or idle).
  const Vec6& last_commanded() const { return last_commanded_; }

 private:
  struct Pending {
    ActuationCommand command;
    Instant arrival;
  };

  void planned_state(Vec6& q_planned, Vec6& qd_planned) const;

  ControllerConfig config_;
  Rng noise_;
  double dt_;
  JointState state_;
  std::uint64_t tick_index_ = 0;
  std::uint32_t seq_ = 0;
  std::vector<Pending> pending_;
  std::optional<ActuationCommand> active_;
  Instant activated_at_;
  std::deque<Vec6> pipeline_;        // desired accelerations not yet realized
  std::deque<Vec6> desired_history_; // most recent first, for the current model
  ControllerCounters counters_;
  bool fault_ = false;
  Vec6 last_commanded_ = Vec6::Zero();
};

}  // namespace urlab::ursim
