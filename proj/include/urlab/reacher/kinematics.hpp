#pragma once

#include <array>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "urlab/ursim/types.hpp"

namespace urlab::reacher {

using ursim::Duration;
using ursim::Vec6;

enum class Variant { TwoJoint, SixJoint };

/// Standard (distal) Denavit-Hartenberg row.
struct DhRow {
  double a = 0.0;
  double d = 0.0;
  double alpha = 0.0;
  double theta_offset = 0.0;
};

using DhTable = std::array<DhRow, 6>;

/// Standard UR5 DH parameters (metres, radians).
DhTable ur5_dh();

struct KinematicChain {
  Variant variant = Variant::TwoJoint;
  double l1 = 0.425;  // TwoJoint upper arm
  double l2 = 0.392;  // TwoJoint forearm
  DhTable dh = ur5_dh();
  std::vector<int> actuated{1, 2};

  static KinematicChain two_joint();
  static KinematicChain six_joint();

  /// 2 for the planar task, 3 for the spatial one.
  int workspace_dim() const { return variant == Variant::TwoJoint ? 2 : 3; }
  int n_actuated() const { return static_cast<int>(actuated.size()); }

  /// Throws std::invalid_argument for non-positive link lengths or bad joint indices.
  void validate() const;
};

/// Homogeneous transform of one DH row at joint angle theta.
Eigen::Isometry3d dh_transform(const DhRow& row, double theta);

/// Flange pose of the full chain.
Eigen::Isometry3d dh_forward(const DhTable& dh, const Vec6& q);

Eigen::Vector2d planar_fk(double qa, double qb, double l1, double l2);

/// Closed-form two-link inverse kinematics, elbow-down branch (qb >= 0).
/// Throws std::domain_error for unreachable points.
std::pair<double, double> planar_ik(double x, double y, double l1, double l2);

/// Fingertip coordinates in the task workspace (length workspace_dim()).
Eigen::VectorXd fingertip_position(const Vec6& q, const KinematicChain& chain);

/// Extracts the actuated joints of a full joint vector.
Eigen::VectorXd actuated(const Vec6& q, const KinematicChain& chain);

/// Writes `values` into the actuated joints of `base`.
Vec6 scatter(const Eigen::VectorXd& values, const KinematicChain& chain, Vec6 base = Vec6::Zero());

}  // namespace urlab::reacher
