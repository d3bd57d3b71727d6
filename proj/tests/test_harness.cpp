#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <thread>

#include "urlab/harness/mailbox.hpp"
#include "urlab/harness/rig.hpp"

using namespace urlab;
using namespace urlab::harness;
using namespace std::chrono_literals;

namespace {

/// Emits a fixed action and records when it was asked.
class ConstantAgent : public trpo::Agent {
 public:
  explicit ConstantAgent(Eigen::VectorXd a) : action_(std::move(a)) {}
  Eigen::VectorXd act(const Eigen::VectorXd&) override {
    ++acts;
    return action_;
  }
  std::optional<trpo::LearnStats> learn(const std::vector<trpo::EpisodeLog>& batch) override {
    ++learns;
    last_batch_size = batch.size();
    return trpo::LearnStats{};
  }
  std::string name() const override { return "constant"; }

  int acts = 0;
  int learns = 0;
  std::size_t last_batch_size = 0;

 private:
  Eigen::VectorXd action_;
};

RigStreams streams(std::uint64_t s) { return {Rng(s), Rng(s + 1), Rng(s + 2), Rng(s + 3), Rng(s + 4)}; }

RigConfig base_config() {
  RigConfig c;
  c.total_steps = 0;
  return c;
}

}  // namespace

TEST(Mailbox, LatestValueWins) {
  Mailbox<int> mb;
  mb.write(1, Instant(0));
  mb.write(2, Instant::from(1ms));
  EXPECT_EQ(mb.read_latest(Instant::from(1ms)).value, 2);
  EXPECT_EQ(mb.counter(), 2u);
}

TEST(Mailbox, ReadsAreIdempotent) {
  Mailbox<int> mb;
  mb.write(7, Instant(0));
  const auto a = mb.read_latest(Instant::from(2ms));
  const auto b = mb.read_latest(Instant::from(2ms));
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.counter, b.counter);
}

TEST(Mailbox, AgeIsExactInVirtualTime) {
  Mailbox<int> mb;
  mb.write(1, Instant::from(5ms));
  EXPECT_EQ(mb.read_latest(Instant::from(8ms)).age, 3ms);
  EXPECT_GE(mb.read_latest(Instant::from(5ms)).age, Duration::zero());
}

TEST(Mailbox, ReadBeforeWriteIsAnError) {
  Mailbox<int> mb;
  EXPECT_THROW(mb.read_latest(Instant(0)), EmptyMailboxError);
}

TEST(Mailbox, ConcurrentReadersNeverSeeTornValues) {
  struct Pair {
    std::int64_t a = 0, b = 0;
  };
  Mailbox<Pair> mb;
  mb.write({0, 0}, Instant(0));
  std::atomic<bool> stop{false};
  std::thread writer([&] {
    for (std::int64_t i = 1; i < 200000; ++i) mb.write({i, -i}, Instant(i));
    stop = true;
  });
  bool torn = false;
  while (!stop) {
    const auto r = mb.read_latest(Instant(0)).value;
    torn |= r.a != -r.b;
  }
  writer.join();
  EXPECT_FALSE(torn);
}

TEST(CycleConfig, StepsPerEpisode) {
  CycleConfig c;
  EXPECT_EQ(c.steps_per_episode(), 100);
  c.action_cycle = 8ms;
  EXPECT_EQ(c.steps_per_episode(), 500);
  c.action_cycle = 30ms;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Rig, FortyMsEpisodeHasHundredStepsAndFiveSendsPerAction) {
  ConstantAgent agent(Eigen::Vector2d(0.05, -0.05));
  Rig rig(base_config(), agent, streams(1));
  rig.reset_arm();
  const auto log = rig.run_episode();
  EXPECT_EQ(log.steps(), 100u);
  EXPECT_EQ(log.rewards.size(), 100u);
  EXPECT_EQ(agent.acts, 100);
  EXPECT_EQ(rig.result().audit.min_sends_per_action, 5u);
  EXPECT_EQ(rig.result().audit.max_sends_per_action, 5u);
  EXPECT_EQ(rig.experience_steps(), 100);
}

TEST(Rig, EightMsEpisodeHasNoRepetition) {
  ConstantAgent agent(Eigen::Vector2d(0.05, -0.05));
  RigConfig c = base_config();
  c.cycle.action_cycle = 8ms;
  Rig rig(c, agent, streams(2));
  rig.reset_arm();
  EXPECT_EQ(rig.run_episode().steps(), 500u);
  EXPECT_EQ(rig.result().audit.min_sends_per_action, 1u);
  EXPECT_EQ(rig.result().audit.max_sends_per_action, 1u);
}

TEST(Rig, ActuationRateIndependentOfActionCycle) {
  for (auto cycle : {8ms, 40ms, 160ms}) {
    ConstantAgent agent(Eigen::Vector2d(0.0, 0.0));
    RigConfig c = base_config();
    c.cycle.action_cycle = cycle;
    Rig rig(c, agent, streams(3));
    rig.reset_arm();
    const auto before = rig.result().audit.actuator_sends;
    const Instant t0 = rig.now();
    rig.run_episode();
    const double sends = static_cast<double>(rig.result().audit.actuator_sends - before);
    EXPECT_NEAR(sends / (rig.now() - t0).count() * 1e9, 125.0, 1.0) << cycle.count();
  }
}

TEST(Rig, ObservationAgeBoundedWithoutDelays) {
  ConstantAgent agent(Eigen::Vector2d(0.1, 0.1));
  RigConfig c = base_config();
  c.medium = linksim::NoDelay{};
  Rig rig(c, agent, streams(4));
  rig.reset_arm();
  const auto log = rig.run_episode();
  for (double age : log.observation_age_ms) {
    EXPECT_GE(age, 0.0);
    EXPECT_LE(age, 8.0);
  }
}

TEST(Rig, ResetAtStartConsumesNoExperience) {
  ConstantAgent agent(Eigen::Vector2d(0.0, 0.0));
  Rig rig(base_config(), agent, streams(5));
  ASSERT_TRUE(rig.reset_arm());
  const Instant t = rig.now();
  EXPECT_TRUE(rig.reset_arm());
  EXPECT_EQ(rig.now(), t);
  EXPECT_EQ(rig.experience_steps(), 0);
}

namespace {

// Oracle: the reset loop in isolation. Speed command clip(gain * err, v)
// tracked with the acceleration limit, explicit 8 ms integration, no lags.
double reset_time_oracle(double displacement, const ResetConfig& r, double v, double a) {
  const double dt = 0.008;
  double q = displacement, qd = 0.0, t = 0.0;
  while (std::abs(q) > r.tolerance && t < 10.0) {
    const double cmd = std::clamp(-r.gain * q, -v, v);
    qd += std::clamp((cmd - qd) / dt, -a, a) * dt;
    q += qd * dt;
    t += dt;
  }
  return t;
}

}  // namespace

TEST(Rig, ResetFromPointThreeRadiansTakesAboutOneSecond) {
  ConstantAgent agent(Eigen::Vector2d(0.0, 0.0));
  RigConfig c = base_config();
  c.medium = linksim::NoDelay{};
  Rig rig(c, agent, streams(6));
  ursim::Vec6 q = c.task.q_start;
  q[1] += 0.3;
  rig.controller().set_joint_state(q, ursim::Vec6::Zero());
  ASSERT_TRUE(rig.reset_arm());
  const double oracle = reset_time_oracle(0.3, c.reset, c.task.bounds.v_task, c.task.bounds.a_task);
  EXPECT_NEAR(oracle, 1.0, 0.3);
  // Pipeline and loop latency add a few ticks on top of the ideal loop.
  EXPECT_NEAR(rig.result().audit.reset_seconds, oracle, 0.1);
  EXPECT_EQ(rig.experience_steps(), 0);
}

TEST(Rig, ExperimentBatchesAndActBeforeLearn) {
  ConstantAgent agent(Eigen::Vector2d(0.05, 0.0));
  RigConfig c = base_config();
  c.total_steps = 4000;
  c.record_events = true;
  Rig rig(c, agent, streams(7));
  const RunResult r = rig.run_experiment();
  EXPECT_EQ(r.batches.size(), 2u);
  EXPECT_EQ(agent.learns, 2);
  EXPECT_EQ(agent.last_batch_size, 20u);
  EXPECT_EQ(r.experience_steps, 4000);
  EXPECT_DOUBLE_EQ(r.experience_seconds, 160.0);
  EXPECT_EQ(r.batches[1].steps, 4000);

  // Learning happens only between episodes: every LearnStart follows an
  // EpisodeEnd, and no ActionWrite falls inside a learn window.
  bool learning = false;
  for (std::size_t i = 0; i < r.events.size(); ++i) {
    const auto& e = r.events[i];
    if (e.kind == EventKind::LearnStart) {
      ASSERT_GT(i, 0u);
      EXPECT_EQ(r.events[i - 1].kind, EventKind::EpisodeEnd);
      learning = true;
    } else if (e.kind == EventKind::LearnEnd) {
      learning = false;
    } else if (e.kind == EventKind::ActionWrite) {
      EXPECT_FALSE(learning);
    }
  }
}

TEST(Rig, ZeroBudgetGivesEmptyResult) {
  ConstantAgent agent(Eigen::Vector2d(0.0, 0.0));
  Rig rig(base_config(), agent, streams(8));
  const RunResult r = rig.run_experiment();
  EXPECT_TRUE(r.batches.empty());
  EXPECT_TRUE(r.updates.empty());
  EXPECT_EQ(agent.learns, 0);
}

TEST(Rig, SafetyKeepsArmInsideUnderPushingPolicy) {
  // Full shoulder speed sweeps the fingertip into a y face every episode.
  for (double s : {1.0, -1.0}) {
    ConstantAgent agent(Eigen::Vector2d(s, 0.0));
    RigConfig c = base_config();
    c.total_steps = 2000;
    Rig rig(c, agent, streams(9));
    const RunResult r = rig.run_experiment();
    EXPECT_GT(r.audit.safety_overrides, 0u);
    EXPECT_LE(r.audit.max_box_excursion, 0.02 + 3 * 0.008 * 0.3 * 0.817);
    EXPECT_LE(r.audit.max_joint_excursion, 0.05);
  }
}

TEST(Rig, IdenticalSeedsIdenticalTrajectories) {
  auto run = [] {
    trpo::RandomAgent agent(2, Rng(3));
    RigConfig c = base_config();
    c.total_steps = 2000;
    c.medium = linksim::WirelessLognormal{};
    c.record_ticks = true;
    Rig rig(c, agent, streams(10));
    const auto r = rig.run_experiment();
    std::vector<double> q;
    for (const auto& t : r.ticks) q.push_back(t.q);
    return std::make_pair(q, r.batches.back().mean_return);
  };
  EXPECT_EQ(run(), run());
}
