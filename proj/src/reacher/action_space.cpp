#include "urlab/reacher/action_space.hpp"

#include <stdexcept>

namespace urlab::reacher {

std::string to_string(ActionSpace space) {
  return space == ActionSpace::Velocity ? "velocity" : "smoothed-position";
}

ActionSpace parse_action_space(const std::string& name) {
  if (name == "velocity") return ActionSpace::Velocity;
  if (name == "smoothed-position" || name == "position") return ActionSpace::SmoothedPosition;
  throw std::invalid_argument("unknown action space '" + name + "'");
}

ActuationCommand velocity_action_to_command(const Eigen::VectorXd& action, const ReacherTask& task,
                                            Duration actuation_cycle) {
  if (action.size() != task.action_dim()) throw std::invalid_argument("action has the wrong dimension");
  if (!action.allFinite()) throw std::invalid_argument("action is not finite");
  const double v = task.bounds.v_task;
  const Eigen::VectorXd clipped = action.cwiseMax(-v).cwiseMin(v);
  return ActuationCommand::speedj(scatter(clipped, task.chain), task.bounds.a_task, 2 * actuation_cycle);
}

SmoothedStep smoothed_position_step(const SmootherState& s, const Eigen::VectorXd& z, const Eigen::VectorXd& q,
                                    const ReacherTask& task, Duration actuation_cycle) {
  const int n = task.action_dim();
  if (z.size() != n || q.size() != n || s.y.size() != n) {
    throw std::invalid_argument("smoother inputs have the wrong dimension");
  }
  SmoothedStep out{s, {}, {}};
  out.state.y = (s.y + s.tau * z).cwiseMax(s.y_min).cwiseMin(s.y_max);
  const Eigen::VectorXd lo = actuated(task.bounds.q_min, task.chain);
  const Eigen::VectorXd hi = actuated(task.bounds.q_max, task.chain);
  out.q_des = (q + s.tau * out.state.y).cwiseMax(lo).cwiseMin(hi);
  ActuationCommand defaults;
  out.command = ActuationCommand::servoj(scatter(out.q_des, task.chain, task.q_start), 2 * actuation_cycle,
                                         defaults.lookahead, defaults.gain, task.bounds.a_task);
  return out;
}

}  // namespace urlab::reacher
