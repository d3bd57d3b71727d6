#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "urlab/rng.hpp"
#include "urlab/ursim/controller.hpp"
#include "urlab/xlab/xcorr.hpp"

using namespace urlab;
using namespace urlab::ursim;
using namespace std::chrono_literals;

namespace {

Vec6 e0(double v) {
  Vec6 x = Vec6::Zero();
  x[0] = v;
  return x;
}

ControllerConfig quiet(int accel_lag = 2, int current_lag = 3) {
  ControllerConfig c;
  c.accel_lag = accel_lag;
  c.current_lag = current_lag;
  c.current_noise = 0.0;
  return c;
}

}  // namespace

TEST(LeadingAxisScale, ScalesProportionally) {
  Vec6 d;
  d << 2.8, 0.7, 0, 0, 0, 0;
  Vec6 expect;
  expect << 1.4, 0.35, 0, 0, 0, 0;
  EXPECT_TRUE(leading_axis_scale(d, 1.4).isApprox(expect, 1e-15));
}

TEST(LeadingAxisScale, WithinLimitUnchanged) {
  Vec6 d;
  d << 1.0, -1.0, 0, 0, 0, 0;
  EXPECT_EQ(leading_axis_scale(d, 1.4), d);
  EXPECT_EQ(leading_axis_scale(Vec6::Zero(), 1.4), Vec6::Zero());
}

TEST(LeadingAxisScale, PreservesDirection) {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    Vec6 d;
    for (int j = 0; j < 6; ++j) d[j] = rng.uniform(-10, 10);
    const Vec6 s = leading_axis_scale(d, 1.4);
    EXPECT_LE(s.cwiseAbs().maxCoeff(), 1.4 + 1e-12);
    EXPECT_NEAR(s.normalized().dot(d.normalized()), 1.0, 1e-12);
  }
}

TEST(Controller, SpeedJFromRestAfterWarmUp) {
  Controller c(quiet());
  c.apply_command(ActuationCommand::speedj(e0(0.3), 1.4, 16ms), Instant(0));
  const auto p0 = c.tick();
  const auto p1 = c.tick();
  EXPECT_EQ(p0.qd[0], 0.0);  // warm-up: nothing realized yet
  EXPECT_EQ(p1.qd[0], 0.0);
  const auto p2 = c.tick();
  EXPECT_NEAR(p2.qd[0], std::min(0.3, 1.4 * 0.008), 1e-15);
  EXPECT_NEAR(p2.q[0], 0.0112 * 0.008, 1e-18);
  EXPECT_NEAR(p2.qdd_target[0], 1.4, 1e-12);
}

TEST(Controller, StopReachesRestInOneRealizedTick) {
  Controller c(quiet(0, 0));
  c.set_joint_state(Vec6::Zero(), e0(0.0112));
  c.apply_command(ActuationCommand::stop(1.4), Instant(0));
  const auto p = c.tick();
  EXPECT_NEAR(p.qd[0], 0.0, 1e-15);
  EXPECT_NEAR(p.qdd_target[0], -1.4, 1e-9);
}

TEST(Controller, SequenceNumbersIncrementByOne) {
  Controller c;
  std::uint32_t prev = c.tick().seq;
  for (int i = 0; i < 100; ++i) {
    const auto p = c.tick();
    EXPECT_EQ(p.seq, prev + 1);
    EXPECT_EQ(p.timestamp_ns, static_cast<std::uint64_t>(i + 1) * 8'000'000u);
    prev = p.seq;
  }
}

TEST(Controller, MidTickCommandWaitsForNextBoundary) {
  Controller c(quiet(0, 0));
  c.apply_command(ActuationCommand::speedj(e0(0.3), 1.4, 16ms), Instant::from(3ms));
  EXPECT_EQ(c.tick().qd[0], 0.0);  // tick at 0 ms
  EXPECT_NEAR(c.tick().qd[0], 0.0112, 1e-15);  // tick at 8 ms
}

TEST(Controller, LaterCommandInSameTickWins) {
  Controller c(quiet(0, 0));
  c.apply_command(ActuationCommand::speedj(e0(0.3), 1.4, 16ms), Instant::from(1ms));
  c.apply_command(ActuationCommand::speedj(e0(-0.3), 1.4, 16ms), Instant::from(5ms));
  c.tick();
  const auto p = c.tick();
  EXPECT_NEAR(p.qd[0], -0.0112, 1e-15);
  EXPECT_EQ(c.counters().dropped, 1u);
}

TEST(Controller, ExpiredCommandDeceleratesWithinLimit) {
  Controller c(quiet(0, 0));
  c.set_joint_state(Vec6::Zero(), e0(0.1));
  c.apply_command(ActuationCommand::speedj(e0(0.1), 1.4, 16ms), Instant(0));
  double prev = c.tick().qd[0];
  EXPECT_NEAR(prev, 0.1, 1e-15);
  for (int i = 0; i < 20; ++i) {
    const double qd = c.tick().qd[0];
    EXPECT_LE(std::abs(qd - prev) / 0.008, 1.4 + 1e-9);
    EXPECT_LE(qd, prev);
    prev = qd;
  }
  EXPECT_NEAR(prev, 0.0, 1e-15);
  EXPECT_GT(c.counters().expired_ticks, 0u);
}

TEST(Controller, SetJointStateThenTickIntegratesOnce) {
  Controller c(quiet());
  Vec6 q;
  q << 0.1, -0.2, 0.3, 0, 0.5, -1;
  const Vec6 qd = e0(0.25);
  c.set_joint_state(q, qd);
  const auto p = c.tick();
  EXPECT_TRUE(p.q.isApprox(q + qd * 0.008, 1e-15));
  EXPECT_EQ(p.qd, qd);
}

TEST(Controller, RestStateIsFixedPoint) {
  Controller c(quiet());
  c.set_joint_state(Vec6::Zero(), Vec6::Zero());
  for (int i = 0; i < 50; ++i) {
    if (i % 5 == 0) c.apply_command(ActuationCommand::stop(), c.next_tick_at());
    const auto p = c.tick();
    EXPECT_EQ(p.q, Vec6::Zero());
    EXPECT_EQ(p.qd, Vec6::Zero());
  }
}

TEST(Controller, RejectsOutOfRangeState) {
  Controller c;
  EXPECT_THROW(c.set_joint_state(Vec6::Zero(), e0(std::numbers::pi + 0.01)), std::invalid_argument);
  EXPECT_THROW(c.set_joint_state(e0(7.0), Vec6::Zero()), std::invalid_argument);
}

TEST(Controller, RejectsNonFiniteAndFlagsServoOutOfRange) {
  Controller c;
  EXPECT_THROW(c.apply_command(ActuationCommand::speedj(e0(NAN), 1.4, 16ms), Instant(0)), std::invalid_argument);
  c.apply_command(ActuationCommand::servoj(e0(10.0), 16ms, 100ms, 300.0), Instant(0));
  EXPECT_TRUE(c.fault());
  EXPECT_EQ(c.counters().faults, 1u);
}

TEST(ControllerProperty, VelocityAndAccelerationLimitsHold) {
  Rng rng(17);
  Controller c(ControllerConfig{}, 5);
  auto prev = c.tick();
  for (int k = 0; k < 20000; ++k) {
    // Commands land on and between boundaries, sometimes not at all.
    if (rng.uniform() < 0.7) {
      const auto at = c.next_tick_at() + Duration(static_cast<std::int64_t>(rng.index(3)) * 3'000'000);
      Vec6 v;
      for (int j = 0; j < 6; ++j) v[j] = rng.uniform(-4.0, 4.0);
      if (rng.uniform() < 0.5) {
        c.apply_command(ActuationCommand::speedj(v, 1.4, 16ms), at);
      } else {
        Vec6 q = c.state().q + 0.3 * v;
        q = q.cwiseMax(-6.0).cwiseMin(6.0);
        c.apply_command(ActuationCommand::servoj(q, 16ms, 100ms, 300.0, 1.4), at);
      }
    }
    const auto p = c.tick();
    ASSERT_LE(p.qd.cwiseAbs().maxCoeff(), std::numbers::pi + 1e-12);
    ASSERT_LE((p.qd - prev.qd).cwiseAbs().maxCoeff() / 0.008, 1.4 + 1e-9);
    prev = p;
  }
}

TEST(ControllerProperty, PipelineLagsShowInCrossCorrelation) {
  Rng rng(23);
  Controller c(ControllerConfig{}, 9);
  std::vector<double> cmd, qdd, current;
  for (int k = 0; k < 20000; ++k) {
    const double v = rng.uniform(-0.3, 0.3);
    c.apply_command(ActuationCommand::speedj(e0(v), 1.4, 16ms), c.next_tick_at());
    const auto p = c.tick();
    cmd.push_back(v);
    qdd.push_back(p.qdd_target[0]);
    current.push_back(p.current[0]);
  }
  EXPECT_EQ(xlab::cross_correlation(cmd, qdd, 10).argmax(), 2);
  EXPECT_EQ(xlab::cross_correlation(cmd, current, 10).argmax(), 3);
}
