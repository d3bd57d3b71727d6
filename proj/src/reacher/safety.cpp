#include "urlab/reacher/safety.hpp"

#include <algorithm>
#include <cmath>

namespace urlab::reacher {
namespace {

using ursim::ActuationCommand;
using ursim::CommandKind;

double seconds(Duration d) { return static_cast<double>(d.count()) * 1e-9; }

}  // namespace

std::string to_string(SafetyReason reason) {
  switch (reason) {
    case SafetyReason::None: return "none";
    case SafetyReason::OutsideBox: return "outside-box";
    case SafetyReason::OutsideJointBounds: return "outside-joint-bounds";
    case SafetyReason::HeadingOutOfBox: return "heading-out-of-box";
    case SafetyReason::HeadingOutOfJointBounds: return "heading-out-of-joint-bounds";
  }
  return "unknown";
}

double box_excursion(const Eigen::VectorXd& fingertip, const TaskBounds& bounds) {
  const Eigen::ArrayXd below = (bounds.box_lo - fingertip).array().max(0.0);
  const Eigen::ArrayXd above = (fingertip - bounds.box_hi).array().max(0.0);
  return std::max(below.maxCoeff(), above.maxCoeff());
}

double joint_excursion(const Vec6& q, const ReacherTask& task) {
  double worst = 0.0;
  for (int j : task.chain.actuated) {
    worst = std::max({worst, task.bounds.q_min[j] - q[j], q[j] - task.bounds.q_max[j]});
  }
  return worst;
}

SafetyDecision safety_override(const ActuationCommand& cmd, const ursim::StatusPacket& packet,
                               const ReacherTask& task, Duration packet_age, const SafetyConfig& config) {
  const ActuationCommand stop = ActuationCommand::stop(cmd.accel_limit);
  if (cmd.kind == CommandKind::Stop) return {cmd, SafetyReason::None};

  const TaskBounds& b = task.bounds;
  const Eigen::VectorXd tip = fingertip_position(packet.q, task.chain);
  if (box_excursion(tip, b) > b.margin) return {stop, SafetyReason::OutsideBox};
  if (joint_excursion(packet.q, task) > 0.0) return {stop, SafetyReason::OutsideJointBounds};

  const double tick = seconds(config.tick);
  const double reaction = seconds(config.reaction);
  Vec6 v_cmd = Vec6::Zero();
  if (cmd.kind == CommandKind::SpeedJ) {
    v_cmd = cmd.values;
  } else {
    v_cmd = (cmd.values - packet.q) / seconds(cmd.lookahead);
  }
  // Only actuated joints move in this task; ignore the rest.
  Vec6 mask = Vec6::Zero();
  for (int j : task.chain.actuated) mask[j] = 1.0;
  v_cmd = v_cmd.cwiseProduct(mask);

  const double a = cmd.accel_limit;
  const Vec6 dv = (v_cmd - packet.qd).cwiseMax(-a * reaction).cwiseMin(a * reaction);
  const Vec6 qd_eff = (packet.qd + dv).cwiseProduct(mask);
  const double t_brake = qd_eff.cwiseAbs().maxCoeff() / a;
  const double horizon = seconds(packet_age) + reaction + 0.5 * t_brake;
  const Vec6 q_pred = packet.q + qd_eff * horizon;

  const Eigen::VectorXd tip_pred = fingertip_position(q_pred, task.chain);
  const Eigen::VectorXd heading = fingertip_position(packet.q + v_cmd * tick, task.chain) - tip;
  for (Eigen::Index i = 0; i < tip.size(); ++i) {
    if ((tip_pred[i] >= b.box_hi[i] && heading[i] > 0.0) || (tip_pred[i] <= b.box_lo[i] && heading[i] < 0.0)) {
      return {stop, SafetyReason::HeadingOutOfBox};
    }
  }
  for (int j : task.chain.actuated) {
    if ((q_pred[j] >= b.q_max[j] - config.joint_margin && v_cmd[j] > 0.0) ||
        (q_pred[j] <= b.q_min[j] + config.joint_margin && v_cmd[j] < 0.0)) {
      return {stop, SafetyReason::HeadingOutOfJointBounds};
    }
  }
  return {cmd, SafetyReason::None};
}

}  // namespace urlab::reacher
