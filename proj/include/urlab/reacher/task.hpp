#pragma once

#include <Eigen/Core>

#include "urlab/reacher/kinematics.hpp"
#include "urlab/rng.hpp"
#include "urlab/ursim/types.hpp"

namespace urlab::reacher {

struct TaskBounds {
  Eigen::VectorXd box_lo;  // fingertip box, workspace coordinates
  Eigen::VectorXd box_hi;
  Vec6 q_min = Vec6::Constant(-ursim::kHardwareAngleLimit);
  Vec6 q_max = Vec6::Constant(ursim::kHardwareAngleLimit);
  double v_task = 0.3;   // rad/s
  double a_task = 1.4;   // rad/s^2
  double margin = 0.02;  // m

  double diagonal() const { return (box_hi - box_lo).norm(); }
  Eigen::VectorXd center() const { return 0.5 * (box_lo + box_hi); }

  /// Throws std::invalid_argument for empty boxes, unordered joint bounds or
  /// non-positive limits.
  void validate(const KinematicChain& chain) const;
};

/// Everything the environment needs to know about the reaching task.
struct ReacherTask {
  KinematicChain chain;
  TaskBounds bounds;
  Vec6 q_start = Vec6::Zero();

  /// Planar task: 0.7 m x 0.5 m box in front of the shoulder, start posture
  /// from inverse kinematics of the box center, joint bounds start +- pi/2.
  static ReacherTask two_joint();
  /// Spatial task: 0.7 m x 0.5 m x 0.4 m box centered on the fingertip of
  /// the start posture, joint bounds start +- pi/2.
  static ReacherTask six_joint();

  int action_dim() const { return chain.n_actuated(); }
  int observation_dim() const { return 3 * chain.n_actuated() + chain.workspace_dim(); }

  void validate() const;
};

/// Negative Euclidean distance between fingertip and target.
double reward(const Eigen::VectorXd& fingertip, const Eigen::VectorXd& target);

/// Uniform point in the task box.
Eigen::VectorXd sample_target(Rng& rng, const TaskBounds& bounds);

/// [angles / pi, velocities / v_task, (target - fingertip) / box diagonal, previous action].
Eigen::VectorXd assemble_observation(const ursim::StatusPacket& packet, const Eigen::VectorXd& target,
                                     const Eigen::VectorXd& prev_action, const ReacherTask& task);

}  // namespace urlab::reacher
