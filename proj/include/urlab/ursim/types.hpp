#pragma once

#include <cstdint>
#include <numbers>

#include <Eigen/Core>

#include "urlab/timebase/instant.hpp"

namespace urlab::ursim {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using timebase::Duration;
using timebase::Instant;

inline constexpr double kHardwareAngleLimit = 2.0 * std::numbers::pi;  // rad
inline constexpr double kHardwareSpeedLimit = std::numbers::pi;        // rad/s

struct JointState {
  Vec6 q = Vec6::Zero();
  Vec6 qd = Vec6::Zero();
  Vec6 qdd_target = Vec6::Zero();
  Vec6 torque_target = Vec6::Zero();
  Vec6 current = Vec6::Zero();
};

enum class CommandKind : std::uint8_t { SpeedJ, ServoJ, Stop };

/// A speedj/servoj/stopj style command.
///
/// `values` holds joint velocities (rad/s) for SpeedJ and joint targets (rad)
/// for ServoJ; it is ignored for Stop. `accel_limit` bounds the leading-axis
/// acceleration for every kind.
struct ActuationCommand {
  CommandKind kind = CommandKind::Stop;
  Vec6 values = Vec6::Zero();
  double accel_limit = 1.4;
  Duration validity = std::chrono::milliseconds(16);
  double gain = 300.0;
  Duration lookahead = std::chrono::milliseconds(100);

  static ActuationCommand speedj(const Vec6& velocities, double accel_limit, Duration validity);
  static ActuationCommand servoj(const Vec6& targets, Duration validity, Duration lookahead, double gain,
                                 double accel_limit = 1.4);
  static ActuationCommand stop(double accel_limit = 1.4);

  bool is_motion() const { return kind != CommandKind::Stop; }

  /// Throws std::invalid_argument on non-finite values, validity <= 0, or a
  /// non-positive servo gain.
  void validate() const;

  bool operator==(const ActuationCommand& other) const;
};

/// One 8 ms sensorimotor snapshot as streamed by the controller.
struct StatusPacket {
  std::uint32_t seq = 0;
  std::uint64_t timestamp_ns = 0;
  Vec6 q = Vec6::Zero();
  Vec6 qd = Vec6::Zero();
  Vec6 qdd_target = Vec6::Zero();
  Vec6 torque_target = Vec6::Zero();
  Vec6 current = Vec6::Zero();

  Instant timestamp() const { return Instant(static_cast<std::int64_t>(timestamp_ns)); }
  bool operator==(const StatusPacket& other) const;
};

}  // namespace urlab::ursim
