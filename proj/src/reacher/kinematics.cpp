#include "urlab/reacher/kinematics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace urlab::reacher {

DhTable ur5_dh() {
  constexpr double h = std::numbers::pi / 2;
  return {{
      {0.0, 0.089159, h, 0.0},
      {-0.425, 0.0, 0.0, 0.0},
      {-0.39225, 0.0, 0.0, 0.0},
      {0.0, 0.10915, h, 0.0},
      {0.0, 0.09465, -h, 0.0},
      {0.0, 0.0823, 0.0, 0.0},
  }};
}

KinematicChain KinematicChain::two_joint() { return {}; }

KinematicChain KinematicChain::six_joint() {
  KinematicChain c;
  c.variant = Variant::SixJoint;
  c.actuated = {0, 1, 2, 3, 4, 5};
  return c;
}

void KinematicChain::validate() const {
  if (!(l1 > 0.0) || !(l2 > 0.0)) throw std::invalid_argument("link lengths must be positive");
  if (actuated.empty()) throw std::invalid_argument("at least one joint must be actuated");
  if (variant == Variant::TwoJoint && actuated.size() != 2) {
    throw std::invalid_argument("the planar task actuates exactly two joints");
  }
  for (std::size_t i = 0; i < actuated.size(); ++i) {
    if (actuated[i] < 0 || actuated[i] > 5) {
      throw std::invalid_argument("actuated joint index out of range: " + std::to_string(actuated[i]));
    }
    if (i > 0 && actuated[i] <= actuated[i - 1]) {
      throw std::invalid_argument("actuated joint indices must be strictly increasing");
    }
  }
}

Eigen::Isometry3d dh_transform(const DhRow& row, double theta) {
  const double t = theta + row.theta_offset;
  const double ct = std::cos(t), st = std::sin(t);
  const double ca = std::cos(row.alpha), sa = std::sin(row.alpha);
  Eigen::Matrix4d m;
  m << ct, -st * ca, st * sa, row.a * ct,
       st, ct * ca, -ct * sa, row.a * st,
       0.0, sa, ca, row.d,
       0.0, 0.0, 0.0, 1.0;
  return Eigen::Isometry3d(m);
}

Eigen::Isometry3d dh_forward(const DhTable& dh, const Vec6& q) {
  Eigen::Isometry3d pose = Eigen::Isometry3d::Identity();
  for (int j = 0; j < 6; ++j) pose = pose * dh_transform(dh[j], q[j]);
  return pose;
}

Eigen::Vector2d planar_fk(double qa, double qb, double l1, double l2) {
  return {l1 * std::cos(qa) + l2 * std::cos(qa + qb), l1 * std::sin(qa) + l2 * std::sin(qa + qb)};
}

std::pair<double, double> planar_ik(double x, double y, double l1, double l2) {
  const double c = (x * x + y * y - l1 * l1 - l2 * l2) / (2.0 * l1 * l2);
  if (c < -1.0 || c > 1.0) throw std::domain_error("point outside the two-link workspace");
  const double qb = std::acos(c);
  const double qa = std::atan2(y, x) - std::atan2(l2 * std::sin(qb), l1 + l2 * std::cos(qb));
  return {qa, qb};
}

Eigen::VectorXd fingertip_position(const Vec6& q, const KinematicChain& chain) {
  if (chain.variant == Variant::TwoJoint) {
    return planar_fk(q[chain.actuated[0]], q[chain.actuated[1]], chain.l1, chain.l2);
  }
  return dh_forward(chain.dh, q).translation();
}

Eigen::VectorXd actuated(const Vec6& q, const KinematicChain& chain) {
  Eigen::VectorXd out(chain.n_actuated());
  for (int i = 0; i < chain.n_actuated(); ++i) out[i] = q[chain.actuated[i]];
  return out;
}

Vec6 scatter(const Eigen::VectorXd& values, const KinematicChain& chain, Vec6 base) {
  for (int i = 0; i < chain.n_actuated(); ++i) base[chain.actuated[i]] = values[i];
  return base;
}

}  // namespace urlab::reacher
