#pragma once

#include <string>

#include <Eigen/Core>

#include "urlab/reacher/task.hpp"
#include "urlab/ursim/types.hpp"

namespace urlab::reacher {

using ursim::ActuationCommand;

enum class ActionSpace { Velocity, SmoothedPosition };

std::string to_string(ActionSpace space);
ActionSpace parse_action_space(const std::string& name);

/// SpeedJ with the actuated joints set to the action clipped to +-v_task and
/// every other joint at zero; accel = a_task, validity = two actuation cycles.
ActuationCommand velocity_action_to_command(const Eigen::VectorXd& action, const ReacherTask& task,
                                            Duration actuation_cycle = std::chrono::milliseconds(8));

/// First-derivative state of the position smoother; tau is the action cycle.
struct SmootherState {
  Eigen::VectorXd y;
  double tau = 0.04;
  double y_min = -1.0;
  double y_max = 1.0;

  static SmootherState zero(int n, double tau) { return {Eigen::VectorXd::Zero(n), tau, -1.0, 1.0}; }
};

struct SmoothedStep {
  SmootherState state;
  Eigen::VectorXd q_des;  // actuated joints
  ActuationCommand command;
};

/// y <- clip(y + tau z, y_min, y_max); q_des <- clip(q + tau y, q_min, q_max).
/// `q` holds the measured actuated-joint angles. The ServoJ command keeps the
/// non-actuated joints at the start posture.
SmoothedStep smoothed_position_step(const SmootherState& s, const Eigen::VectorXd& z, const Eigen::VectorXd& q,
                                    const ReacherTask& task,
                                    Duration actuation_cycle = std::chrono::milliseconds(8));

}  // namespace urlab::reacher
