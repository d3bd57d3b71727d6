#include "urlab/harness/rig.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "urlab/linksim/command_text.hpp"

namespace urlab::harness {
namespace {

using ursim::ActuationCommand;

double ms(Duration d) { return timebase::to_ms(d); }

}  // namespace

std::string to_string(EventKind kind) {
  switch (kind) {
    case EventKind::EpisodeStart: return "episode_start";
    case EventKind::ActionWrite: return "action_write";
    case EventKind::EpisodeEnd: return "episode_end";
    case EventKind::LearnStart: return "learn_start";
    case EventKind::LearnEnd: return "learn_end";
  }
  return "unknown";
}

void CycleConfig::validate() const {
  if (action_cycle <= Duration::zero()) throw std::invalid_argument("action_cycle_ms must be positive");
  if (actuation_cycle <= Duration::zero()) throw std::invalid_argument("actuation cycle must be positive");
  if (episode_length <= Duration::zero()) throw std::invalid_argument("episode_length_s must be positive");
  if (episode_length % action_cycle != Duration::zero()) {
    throw std::invalid_argument("episode_length_s must be a whole number of action cycles");
  }
  if (action_cycle % actuation_cycle != Duration::zero()) {
    throw std::invalid_argument("action_cycle_ms must be a multiple of the 8 ms actuation cycle");
  }
  if (batch_episodes <= 0) throw std::invalid_argument("batch_episodes must be positive");
}

void RigConfig::validate() const {
  task.validate();
  cycle.validate();
  controller.validate();
  if (controller.tick != cycle.actuation_cycle) {
    throw std::invalid_argument("controller tick and actuation cycle must agree");
  }
  linksim::validate(medium);
  linksim::validate(action_delay);
  linksim::validate(actuation_delay);
  if (total_steps < 0) throw std::invalid_argument("total_steps must be non-negative");
  if (!(reset.gain > 0.0) || !(reset.tolerance > 0.0) || reset.timeout <= Duration::zero()) {
    throw std::invalid_argument("reset parameters must be positive");
  }
  if (reset.give_up < reset.timeout) throw std::invalid_argument("reset give_up must not precede the timeout");
}

Rig::Rig(RigConfig config, trpo::Agent& agent, RigStreams streams)
    : config_((config.validate(), std::move(config))),
      agent_(agent),
      streams_(std::move(streams)),
      scheduler_(config_.clock),
      controller_(config_.controller, streams_.controller_noise.next_u64()),
      status_link_(config_.medium, streams_.medium),
      command_link_(config_.actuation_delay, streams_.actuation_injector),
      action_link_(config_.action_delay, streams_.action_injector) {
  steps_per_episode_ = config_.cycle.steps_per_episode();
  logged_joint_ = config_.task.chain.actuated.front();
  prev_action_ = Eigen::VectorXd::Zero(config_.task.action_dim());
  controller_.set_joint_state(config_.task.q_start, ursim::Vec6::Zero());
  const Instant first = controller_.next_tick_at();
  // The actuator's send for an instant must precede the controller tick at
  // that instant; both then keep their relative order by rescheduling.
  scheduler_.schedule_at(first, kActuator, [this] { actuator_send(); });
  scheduler_.schedule_at(first, kController, [this] { controller_tick(); });
}

void Rig::pump_until(const std::function<bool()>& done) {
  while (!done()) {
    if (!scheduler_.advance_to_next()) throw std::logic_error("scheduler ran dry before the run finished");
  }
}

Instant Rig::next_grid_instant() const {
  const std::int64_t cyc = config_.cycle.actuation_cycle.count();
  return Instant((scheduler_.now().nanos() / cyc + 1) * cyc);
}

void Rig::log_event(EventKind kind, int step) {
  if (config_.record_events) result_.events.push_back({scheduler_.now(), kind, episode_, step});
}

// ---- robot-communication process -------------------------------------------

void Rig::controller_tick() {
  const Instant now = scheduler_.now();
  for (auto& [line, delivered] : command_link_.receive(now)) {
    controller_.apply_command(linksim::parse_command(line, config_.controller.default_accel), delivered);
  }
  const ursim::StatusPacket pkt = controller_.tick();
  if (controller_.fault()) {
    ++result_.audit.controller_faults;
    controller_.clear_fault();
    if (mode_ == Mode::Episode) {
      throw std::runtime_error("controller fault during episode " + std::to_string(episode_) + " at " +
                               to_string(now));
    }
  }
  if (mode_ == Mode::Episode) {
    const auto& s = controller_.state();
    const Eigen::VectorXd tip = reacher::fingertip_position(s.q, config_.task.chain);
    auto& audit = result_.audit;
    audit.max_box_excursion = std::max(audit.max_box_excursion, reacher::box_excursion(tip, config_.task.bounds));
    audit.max_joint_excursion = std::max(audit.max_joint_excursion, reacher::joint_excursion(s.q, config_.task));
    if (config_.record_ticks) {
      const int j = logged_joint_;
      result_.ticks.push_back({now, pkt.seq, controller_.last_commanded()[j], pkt.q[j], pkt.qd[j],
                               pkt.qdd_target[j], pkt.torque_target[j], pkt.current[j]});
    }
  }
  const Instant delivery = status_link_.send(linksim::encode_status(pkt), now);
  scheduler_.schedule_at(delivery, kSensor, [this] { sensor_receive(); });
  scheduler_.schedule_at(controller_.next_tick_at(), kController, [this] { controller_tick(); });
}

void Rig::close_send_count() {
  if (send_tag_.episode < 0) return;
  auto& audit = result_.audit;
  if (!send_count_seen_) {
    audit.min_sends_per_action = audit.max_sends_per_action = send_count_;
    send_count_seen_ = true;
  } else {
    audit.min_sends_per_action = std::min(audit.min_sends_per_action, send_count_);
    audit.max_sends_per_action = std::max(audit.max_sends_per_action, send_count_);
  }
  send_tag_ = {};
  send_count_ = 0;
}

void Rig::actuator_send() {
  const Instant now = scheduler_.now();
  if (auto slot = actuator_box_.peek()) {
    if (!(slot->tag == send_tag_)) {
      close_send_count();
      send_tag_ = slot->tag;
    }
    if (send_tag_.episode >= 0) ++send_count_;
    ++result_.audit.actuator_sends;
    command_link_.send(linksim::format_command(slot->command), now);
  }
  scheduler_.schedule_at(now + config_.cycle.actuation_cycle, kActuator, [this] { actuator_send(); });
}

void Rig::sensor_receive() {
  const Instant now = scheduler_.now();
  auto delivered = status_link_.receive(now);
  if (delivered.empty()) return;
  for (auto& [bytes, at] : delivered) {
    sensor_box_.write(linksim::decode_status(bytes), at);
    if (config_.record_arrivals) result_.arrivals.push_back(at);
  }
  scheduler_.schedule_at(now, kEnvironment, [this] { environment_on_packet(); });
}

// ---- RL process --------------------------------------------------------------

void Rig::write_actuator(const ActuationCommand& cmd, ActionTag tag) {
  actuator_box_.write(ActuatorSlot{cmd, tag}, scheduler_.now());
}

void Rig::environment_on_packet() {
  const Instant now = scheduler_.now();
  const ursim::StatusPacket pkt = sensor_box_.read_latest(now).value;
  const auto& task = config_.task;
  if (mode_ == Mode::Resetting) {
    const ursim::Vec6 err = task.q_start - pkt.q;
    if (err.cwiseAbs().maxCoeff() <= config_.reset.tolerance) {
      write_actuator(ActuationCommand::stop(task.bounds.a_task), {});
      reset_done_ = true;
    } else if (now - reset_started_ >= config_.reset.give_up) {
      write_actuator(ActuationCommand::stop(task.bounds.a_task), {});
      reset_done_ = true;
    } else {
      // A slow reset is flagged once but keeps going: starting an episode
      // mid-motion can leave the fingertip outside the box.
      if (!reset_faulted_ && now - reset_started_ >= config_.reset.timeout) {
        ++result_.audit.reset_faults;
        reset_faulted_ = true;
      }
      const double v = task.bounds.v_task;
      const ursim::Vec6 speed = (config_.reset.gain * err).cwiseMax(-v).cwiseMin(v);
      write_actuator(ActuationCommand::speedj(speed, task.bounds.a_task, 2 * config_.cycle.actuation_cycle), {});
    }
    return;
  }
  if (mode_ != Mode::Episode) return;

  ObservationFrame frame;
  frame.observation = reacher::assemble_observation(pkt, target_, prev_action_, task);
  frame.distance = (target_ - reacher::fingertip_position(pkt.q, task.chain)).norm();
  frame.reward = -frame.distance;
  frame.packet_time = pkt.timestamp();
  frame.episode = episode_;
  observation_box_.write(std::move(frame), now);

  if (intended_) {
    const auto decision = reacher::safety_override(*intended_, pkt, task, now - pkt.timestamp(), config_.safety);
    if (decision.overridden()) ++result_.audit.safety_overrides;
    write_actuator(decision.command, intended_tag_);
  }
}

void Rig::environment_on_action(const Eigen::VectorXd& action, ActionTag tag) {
  if (mode_ != Mode::Episode || tag.episode != episode_) {
    ++result_.audit.stale_actions;
    return;
  }
  const Instant now = scheduler_.now();
  const ursim::StatusPacket pkt = sensor_box_.read_latest(now).value;
  const auto& task = config_.task;
  prev_action_ = action;
  if (config_.action_space == reacher::ActionSpace::Velocity) {
    intended_ = reacher::velocity_action_to_command(action, task, config_.cycle.actuation_cycle);
  } else {
    auto step = reacher::smoothed_position_step(smoother_, action, reacher::actuated(pkt.q, task.chain), task,
                                                config_.cycle.actuation_cycle);
    smoother_ = std::move(step.state);
    intended_ = step.command;
  }
  intended_tag_ = tag;
  ++result_.audit.actions_applied;
  const auto decision = reacher::safety_override(*intended_, pkt, task, now - pkt.timestamp(), config_.safety);
  if (decision.overridden()) ++result_.audit.safety_overrides;
  write_actuator(decision.command, tag);
}

void Rig::environment_start_episode() {
  const auto& task = config_.task;
  mode_ = Mode::Episode;
  ++episode_;
  target_ = reacher::sample_target(streams_.targets, task.bounds);
  prev_action_ = Eigen::VectorXd::Zero(task.action_dim());
  smoother_ = reacher::SmootherState::zero(task.action_dim(), timebase::to_ms(config_.cycle.action_cycle) * 1e-3);
  intended_.reset();
  intended_tag_ = {};
  log_event(EventKind::EpisodeStart);
  environment_on_packet();
}

void Rig::environment_end_episode() {
  mode_ = Mode::Idle;
  intended_.reset();
  write_actuator(ActuationCommand::stop(config_.task.bounds.a_task), {});
  log_event(EventKind::EpisodeEnd, step_);
  episode_done_ = true;
}

void Rig::agent_step() {
  const Instant now = scheduler_.now();
  const ObservationFrame frame = observation_box_.read_latest(now).value;
  if (step_ > 0) log_.rewards.push_back(frame.reward);
  if (step_ == steps_per_episode_) {
    log_.final_distance = frame.distance;
    scheduler_.schedule_at(now, kEnvironment, [this] { environment_end_episode(); });
    return;
  }
  Eigen::VectorXd action = agent_.act(frame.observation);
  const ActionTag tag{episode_, step_};
  const Instant delivery = action_link_.send({action, tag}, now);
  log_event(EventKind::ActionWrite, step_);
  const double age_ms = ms(now - frame.packet_time);
  result_.audit.obs_to_action_ms.push_back(age_ms);
  log_.observations.push_back(frame.observation);
  log_.actions.push_back(std::move(action));
  log_.observation_age_ms.push_back(age_ms);
  scheduler_.schedule_at(delivery, kEnvironment, [this] {
    for (auto& [msg, at] : action_link_.receive(scheduler_.now())) environment_on_action(msg.first, msg.second);
  });
  ++step_;
  ++result_.experience_steps;
  scheduler_.schedule_at(now + config_.cycle.action_cycle, kAgent, [this] { agent_step(); });
}

// ---- coordination --------------------------------------------------------------

bool Rig::reset_arm() {
  if (mode_ == Mode::Episode) throw std::logic_error("reset_arm called during an episode");
  const auto converged = [&] {
    const auto pkt = sensor_box_.peek();
    return pkt && (config_.task.q_start - pkt->q).cwiseAbs().maxCoeff() <= config_.reset.tolerance &&
           pkt->qd.cwiseAbs().maxCoeff() <= config_.reset.tolerance;
  };
  if (converged()) return true;
  const std::uint64_t faults_before = result_.audit.reset_faults;
  mode_ = Mode::Resetting;
  reset_done_ = false;
  reset_faulted_ = false;
  reset_started_ = scheduler_.now();
  pump_until([&] { return reset_done_; });
  mode_ = Mode::Idle;
  result_.audit.reset_seconds += (scheduler_.now() - reset_started_).count() * 1e-9;
  return result_.audit.reset_faults == faults_before;
}

trpo::EpisodeLog Rig::run_episode() {
  if (mode_ != Mode::Idle) throw std::logic_error("run_episode requires an idle rig");
  log_ = {};
  step_ = 0;
  episode_done_ = false;
  if (sensor_box_.empty()) pump_until([&] { return !sensor_box_.empty(); });
  const Instant start = next_grid_instant();
  scheduler_.schedule_at(start, kEnvironment, [this] { environment_start_episode(); });
  scheduler_.schedule_at(start, kAgent, [this] { agent_step(); });
  pump_until([&] { return episode_done_; });
  close_send_count();
  return std::move(log_);
}

RunResult Rig::run_experiment() {
  const std::int64_t per_batch = static_cast<std::int64_t>(steps_per_episode_) * config_.cycle.batch_episodes;
  const std::int64_t batches = config_.total_steps / per_batch;
  for (std::int64_t b = 0; b < batches; ++b) {
    std::vector<trpo::EpisodeLog> episodes;
    episodes.reserve(static_cast<std::size_t>(config_.cycle.batch_episodes));
    for (int e = 0; e < config_.cycle.batch_episodes; ++e) {
      reset_arm();
      episodes.push_back(run_episode());
      const auto& ep = episodes.back();
      result_.episodes.push_back({episode_, ep.total_return(), ep.final_distance, static_cast<int>(ep.steps())});
    }
    log_event(EventKind::LearnStart);
    if (auto stats = agent_.learn(episodes)) {
      auto& audit = result_.audit;
      if (stats->policy.accepted) {
        ++audit.updates_accepted;
        audit.max_kl = std::max(audit.max_kl, stats->policy.kl);
      } else {
        ++audit.updates_rejected;
      }
      result_.updates.push_back(*stats);
    }
    log_event(EventKind::LearnEnd);

    BatchStats bs;
    bs.batch = static_cast<int>(b);
    bs.steps = result_.experience_steps;
    double sum = 0.0, sum_sq = 0.0, dist = 0.0;
    for (const auto& ep : episodes) {
      const double r = ep.total_return();
      sum += r;
      sum_sq += r * r;
      dist += ep.final_distance;
    }
    const double n = static_cast<double>(episodes.size());
    bs.mean_return = sum / n;
    bs.std_return = std::sqrt(std::max(0.0, sum_sq / n - bs.mean_return * bs.mean_return));
    bs.mean_final_distance = dist / n;
    result_.batches.push_back(bs);
    if (config_.keep_episodes) {
      for (auto& ep : episodes) result_.episode_logs.push_back(std::move(ep));
    }
  }
  result_.experience_seconds = static_cast<double>(result_.experience_steps) *
                               timebase::to_ms(config_.cycle.action_cycle) * 1e-3;
  result_.simulated_seconds = scheduler_.now().seconds();
  result_.audit.controller = controller_.counters();
  result_.audit.max_lateness_ms = ms(scheduler_.max_lateness());
  return result_;
}

}  // namespace urlab::harness
