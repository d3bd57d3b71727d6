#include "urlab/ursim/controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace urlab::ursim {

void ControllerConfig::validate() const {
  if (tick <= Duration::zero()) throw std::invalid_argument("controller tick must be positive");
  if (accel_lag < 0 || current_lag < accel_lag) {
    throw std::invalid_argument("controller lags must satisfy current_lag >= accel_lag >= 0");
  }
  if (!(default_accel > 0.0)) throw std::invalid_argument("controller default_accel must be positive");
  if (!(speed_limit > 0.0) || !(angle_limit > 0.0)) {
    throw std::invalid_argument("controller hardware limits must be positive");
  }
  if (current_noise < 0.0) throw std::invalid_argument("controller current_noise must be non-negative");
}

Vec6 leading_axis_scale(const Vec6& desired, double a_max) {
  const double lead = desired.cwiseAbs().maxCoeff();
  if (lead <= a_max) return desired;
  return desired * (a_max / lead);
}

Controller::Controller(ControllerConfig config, std::uint64_t noise_seed)
    : config_(config), noise_(noise_seed), dt_(std::chrono::duration<double>(config.tick).count()) {
  config_.validate();
  pipeline_.assign(static_cast<std::size_t>(config_.accel_lag), Vec6::Zero());
}

Instant Controller::next_tick_at() const {
  return Instant(static_cast<std::int64_t>(tick_index_) * config_.tick.count());
}

void Controller::apply_command(const ActuationCommand& cmd, Instant arrival) {
  cmd.validate();
  if (cmd.kind == CommandKind::ServoJ && (cmd.values.cwiseAbs().array() > config_.angle_limit).any()) {
    fault_ = true;
    ++counters_.faults;
    return;
  }
  ++counters_.commands_received;
  pending_.push_back(Pending{cmd, arrival});
}

void Controller::set_joint_state(const Vec6& q, const Vec6& qd) {
  if (!q.allFinite() || !qd.allFinite()) throw std::invalid_argument("joint state must be finite");
  if ((q.cwiseAbs().array() > config_.angle_limit).any()) {
    throw std::invalid_argument("joint angle outside hardware range");
  }
  if ((qd.cwiseAbs().array() > config_.speed_limit).any()) {
    throw std::invalid_argument("joint velocity outside hardware range");
  }
  state_ = JointState{};
  state_.q = q;
  state_.qd = qd;
  pipeline_.assign(static_cast<std::size_t>(config_.accel_lag), Vec6::Zero());
  desired_history_.clear();
  pending_.clear();
  active_.reset();
}

void Controller::planned_state(Vec6& q_planned, Vec6& qd_planned) const {
  q_planned = state_.q;
  qd_planned = state_.qd;
  for (const Vec6& a : pipeline_) {
    qd_planned = (qd_planned + a * dt_).cwiseMax(-config_.speed_limit).cwiseMin(config_.speed_limit);
    q_planned += qd_planned * dt_;
  }
}

StatusPacket Controller::tick() {
  const Instant now = next_tick_at();
  const std::int64_t tick_ns = config_.tick.count();

  // Pick up the newest arrival; anything older in the same window is dropped.
  bool preempt = false;
  double preempt_accel = config_.default_accel;
  auto ready_end = std::stable_partition(pending_.begin(), pending_.end(),
                                         [&](const Pending& p) { return p.arrival <= now; });
  if (ready_end != pending_.begin()) {
    const Pending& newest = *(ready_end - 1);
    counters_.dropped += static_cast<std::uint64_t>(ready_end - pending_.begin() - 1);
    const bool asynchronous = newest.arrival.nanos() % tick_ns != 0;
    const bool running = active_ && active_->is_motion() && now < activated_at_ + active_->validity;
    if (config_.preempt_on_async_arrival && asynchronous && running) {
      preempt = true;
      preempt_accel = active_->accel_limit;
      ++counters_.preempted_ticks;
    }
    active_ = newest.command;
    activated_at_ = preempt ? now + config_.tick : now;
    pending_.erase(pending_.begin(), ready_end);
  }

  Vec6 q_p, qd_p;
  planned_state(q_p, qd_p);

  Vec6 desired = Vec6::Zero();
  last_commanded_.setZero();
  if (preempt) {
    desired = leading_axis_scale(-qd_p / dt_, preempt_accel);
  } else if (!active_) {
    desired = leading_axis_scale(-qd_p / dt_, config_.default_accel);
  } else if (now >= activated_at_ + active_->validity) {
    ++counters_.expired_ticks;
    desired = leading_axis_scale(-qd_p / dt_, active_->accel_limit);
  } else {
    const ActuationCommand& cmd = *active_;
    switch (cmd.kind) {
      case CommandKind::SpeedJ:
        desired = (cmd.values - qd_p) / dt_;
        last_commanded_ = cmd.values;
        break;
      case CommandKind::ServoJ:
        desired = cmd.gain * (cmd.values - q_p) - 2.0 * std::sqrt(cmd.gain) * qd_p;
        last_commanded_ = cmd.values;
        break;
      case CommandKind::Stop:
        desired = -qd_p / dt_;
        break;
    }
    desired = leading_axis_scale(desired, cmd.accel_limit);
  }

  Vec6 realized = desired;
  if (config_.accel_lag > 0) {
    pipeline_.push_back(desired);
    realized = pipeline_.front();
    pipeline_.pop_front();
  }

  desired_history_.push_front(desired);
  while (desired_history_.size() > static_cast<std::size_t>(config_.current_lag) + 1) desired_history_.pop_back();
  const Vec6 lagged_accel = desired_history_.size() > static_cast<std::size_t>(config_.current_lag)
                                ? desired_history_[static_cast<std::size_t>(config_.current_lag)]
                                : Vec6::Zero();

  state_.qd = (state_.qd + realized * dt_).cwiseMax(-config_.speed_limit).cwiseMin(config_.speed_limit);
  state_.q += state_.qd * dt_;
  state_.qdd_target = realized;
  state_.torque_target = config_.inertia_scale * realized;
  for (int j = 0; j < 6; ++j) {
    state_.current[j] = config_.current_gain * config_.inertia_scale * lagged_accel[j] +
                        config_.friction_gain * state_.qd[j] + config_.current_noise * noise_.normal();
  }

  StatusPacket pkt;
  pkt.seq = seq_++;
  pkt.timestamp_ns = static_cast<std::uint64_t>(now.nanos());
  pkt.q = state_.q;
  pkt.qd = state_.qd;
  pkt.qdd_target = state_.qdd_target;
  pkt.torque_target = state_.torque_target;
  pkt.current = state_.current;
  ++tick_index_;
  ++counters_.ticks;
  return pkt;
}

}  // namespace urlab::ursim
