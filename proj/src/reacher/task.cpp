#include "urlab/reacher/task.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace urlab::reacher {

void TaskBounds::validate(const KinematicChain& chain) const {
  if (box_lo.size() != chain.workspace_dim() || box_hi.size() != chain.workspace_dim()) {
    throw std::invalid_argument("task box dimension does not match the kinematic variant");
  }
  if (!((box_hi - box_lo).array() > 0.0).all()) throw std::invalid_argument("task box sides must be positive");
  if (!((q_max - q_min).array() > 0.0).all()) throw std::invalid_argument("joint bounds must satisfy q_min < q_max");
  if (!(v_task > 0.0) || !(a_task > 0.0)) throw std::invalid_argument("task speed and acceleration must be positive");
  if (margin < 0.0) throw std::invalid_argument("safety margin must be non-negative");
}

ReacherTask ReacherTask::two_joint() {
  ReacherTask t;
  t.chain = KinematicChain::two_joint();
  t.bounds.box_lo = Eigen::Vector2d(0.02, -0.25);
  t.bounds.box_hi = Eigen::Vector2d(0.72, 0.25);
  const Eigen::VectorXd c = t.bounds.center();
  const auto [qa, qb] = planar_ik(c[0], c[1], t.chain.l1, t.chain.l2);
  t.q_start[t.chain.actuated[0]] = qa;
  t.q_start[t.chain.actuated[1]] = qb;
  for (int j : t.chain.actuated) {
    t.bounds.q_min[j] = t.q_start[j] - std::numbers::pi / 2;
    t.bounds.q_max[j] = t.q_start[j] + std::numbers::pi / 2;
  }
  return t;
}

ReacherTask ReacherTask::six_joint() {
  ReacherTask t;
  t.chain = KinematicChain::six_joint();
  constexpr double h = std::numbers::pi / 2;
  t.q_start << 0.0, -h, h, -h, -h, 0.0;
  const Eigen::Vector3d c = fingertip_position(t.q_start, t.chain);
  const Eigen::Vector3d half(0.35, 0.25, 0.2);
  t.bounds.box_lo = c - half;
  t.bounds.box_hi = c + half;
  t.bounds.q_min = t.q_start.array() - h;
  t.bounds.q_max = t.q_start.array() + h;
  return t;
}

void ReacherTask::validate() const {
  chain.validate();
  bounds.validate(chain);
  for (int j : chain.actuated) {
    if (q_start[j] < bounds.q_min[j] || q_start[j] > bounds.q_max[j]) {
      throw std::invalid_argument("start posture lies outside the joint bounds");
    }
  }
}

double reward(const Eigen::VectorXd& fingertip, const Eigen::VectorXd& target) {
  if (fingertip.size() != target.size()) throw std::invalid_argument("reward: point dimensions differ");
  return -(target - fingertip).norm();
}

Eigen::VectorXd sample_target(Rng& rng, const TaskBounds& bounds) {
  if (bounds.box_lo.size() != bounds.box_hi.size() || !((bounds.box_hi - bounds.box_lo).array() > 0.0).all()) {
    throw std::invalid_argument("sample_target: degenerate task box");
  }
  Eigen::VectorXd p(bounds.box_lo.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = rng.uniform(bounds.box_lo[i], bounds.box_hi[i]);
  return p;
}

Eigen::VectorXd assemble_observation(const ursim::StatusPacket& packet, const Eigen::VectorXd& target,
                                     const Eigen::VectorXd& prev_action, const ReacherTask& task) {
  const int n = task.chain.n_actuated();
  const int w = task.chain.workspace_dim();
  if (prev_action.size() != n) throw std::invalid_argument("previous action has the wrong dimension");
  Eigen::VectorXd obs(3 * n + w);
  obs.segment(0, n) = actuated(packet.q, task.chain) / std::numbers::pi;
  obs.segment(n, n) = actuated(packet.qd, task.chain) / task.bounds.v_task;
  obs.segment(2 * n, w) = (target - fingertip_position(packet.q, task.chain)) / task.bounds.diagonal();
  obs.segment(2 * n + w, n) = prev_action;
  return obs;
}

}  // namespace urlab::reacher
