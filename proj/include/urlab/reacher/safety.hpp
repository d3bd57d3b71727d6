#pragma once

#include <string>

#include "urlab/reacher/task.hpp"
#include "urlab/ursim/types.hpp"

namespace urlab::reacher {

struct SafetyConfig {
  // Time from the packet being read until a replacement command starts to
  // bite: sensor latency, actuator period and the controller pipeline.
  Duration reaction = std::chrono::milliseconds(32);
  Duration tick = std::chrono::milliseconds(8);
  double joint_margin = 0.01;  // rad
};

enum class SafetyReason { None, OutsideBox, OutsideJointBounds, HeadingOutOfBox, HeadingOutOfJointBounds };

std::string to_string(SafetyReason reason);

struct SafetyDecision {
  ursim::ActuationCommand command;
  SafetyReason reason = SafetyReason::None;

  bool overridden() const { return reason != SafetyReason::None; }
};

/// Replaces `cmd` with Stop when the arm is out of bounds, or when the command
/// drives it outward and the fingertip (or a joint) is predicted to reach the
/// boundary before a stop could take hold. The prediction extrapolates the
/// packet state by its age plus the reaction time plus half the braking time.
/// Stop commands always pass through.
SafetyDecision safety_override(const ursim::ActuationCommand& cmd, const ursim::StatusPacket& packet,
                               const ReacherTask& task, Duration packet_age = Duration::zero(),
                               const SafetyConfig& config = {});

/// How far the fingertip lies outside the box (0 when inside), in metres.
double box_excursion(const Eigen::VectorXd& fingertip, const TaskBounds& bounds);

/// How far any actuated joint lies outside its bounds (0 when inside), in radians.
double joint_excursion(const Vec6& q, const ReacherTask& task);

}  // namespace urlab::reacher
