#include <cmath>
#include <stdexcept>

#include "urlab/ursim/types.hpp"

namespace urlab::ursim {

ActuationCommand ActuationCommand::speedj(const Vec6& velocities, double accel_limit, Duration validity) {
  ActuationCommand c;
  c.kind = CommandKind::SpeedJ;
  c.values = velocities;
  c.accel_limit = accel_limit;
  c.validity = validity;
  return c;
}

ActuationCommand ActuationCommand::servoj(const Vec6& targets, Duration validity, Duration lookahead, double gain,
                                          double accel_limit) {
  ActuationCommand c;
  c.kind = CommandKind::ServoJ;
  c.values = targets;
  c.validity = validity;
  c.lookahead = lookahead;
  c.gain = gain;
  c.accel_limit = accel_limit;
  return c;
}

ActuationCommand ActuationCommand::stop(double accel_limit) {
  ActuationCommand c;
  c.kind = CommandKind::Stop;
  c.accel_limit = accel_limit;
  return c;
}

void ActuationCommand::validate() const {
  if (!values.allFinite()) throw std::invalid_argument("command values must be finite");
  if (!(accel_limit > 0.0) || !std::isfinite(accel_limit)) {
    throw std::invalid_argument("command accel_limit must be positive");
  }
  if (validity <= Duration::zero()) throw std::invalid_argument("command validity must be positive");
  if (kind == CommandKind::ServoJ) {
    if (!(gain > 0.0) || !std::isfinite(gain)) throw std::invalid_argument("servoj gain must be positive");
    if (lookahead <= Duration::zero()) throw std::invalid_argument("servoj lookahead must be positive");
  }
}

bool ActuationCommand::operator==(const ActuationCommand& o) const {
  return kind == o.kind && values == o.values && accel_limit == o.accel_limit && validity == o.validity &&
         gain == o.gain && lookahead == o.lookahead;
}

bool StatusPacket::operator==(const StatusPacket& o) const {
  return seq == o.seq && timestamp_ns == o.timestamp_ns && q == o.q && qd == o.qd && qdd_target == o.qdd_target &&
         torque_target == o.torque_target && current == o.current;
}

}  // namespace urlab::ursim
