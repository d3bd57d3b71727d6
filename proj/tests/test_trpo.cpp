#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <vector>

#include "support/oracles.hpp"
#include "urlab/trpo/agent.hpp"
#include "urlab/trpo/cg.hpp"
#include "urlab/trpo/checkpoint.hpp"
#include "urlab/trpo/critic.hpp"
#include "urlab/trpo/gaussian.hpp"
#include "urlab/trpo/returns.hpp"
#include "urlab/trpo/trpo.hpp"

using namespace urlab;
using namespace urlab::trpo;

namespace {

VectorXd vec(std::initializer_list<double> v) {
  VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) x[i++] = d;
  return x;
}

}  // namespace

TEST(Mlp, ParameterLayout) {
  const Mlp m({3, 4, 2});
  EXPECT_EQ(m.num_params(), 3 * 4 + 4 + 4 * 2 + 2);
  EXPECT_THROW(Mlp({3}), std::invalid_argument);
}

TEST(Mlp, ForwardMatchesHandComputation) {
  const Mlp m({2, 2, 1});
  // W0 column-major (2x2), b0, W1 (1x2), b1.
  const VectorXd theta = vec({0.1, 0.2, -0.3, 0.4, 0.05, -0.05, 0.7, -0.6, 0.2});
  const Eigen::Vector2d x(0.5, -1.0);
  const double h0 = std::tanh(0.1 * 0.5 + -0.3 * -1.0 + 0.05);
  const double h1 = std::tanh(0.2 * 0.5 + 0.4 * -1.0 - 0.05);
  EXPECT_NEAR(m.forward(theta, x)(0, 0), 0.7 * h0 - 0.6 * h1 + 0.2, 1e-15);
}

TEST(Mlp, JvpAndBackwardMatchFiniteDifferences) {
  Rng rng(4);
  const Mlp m({3, 5, 5, 2});
  const VectorXd theta = m.orthogonal_init(rng, 1.0, 1.0) + VectorXd::Constant(m.num_params(), 0.01);
  const MatrixXd x = MatrixXd::NullaryExpr(3, 7, [&] { return rng.normal(); });
  const VectorXd v = VectorXd::NullaryExpr(m.num_params(), [&] { return rng.normal(); });
  Mlp::Cache cache;
  m.forward(theta, x, &cache);
  const double h = 1e-6;
  const MatrixXd fd = (m.forward(theta + h * v, x) - m.forward(theta - h * v, x)) / (2 * h);
  EXPECT_LT((m.jvp(theta, cache, v) - fd).norm() / fd.norm(), 1e-7);

  const MatrixXd w = MatrixXd::NullaryExpr(2, 7, [&] { return rng.normal(); });
  const VectorXd g = m.backward(theta, cache, w);
  const VectorXd gfd = oracle::fd_gradient(
      [&](const VectorXd& th) { return (m.forward(th, x).array() * w.array()).sum(); }, theta);
  EXPECT_LT(oracle::relative_error(g, gfd), 1e-7);
}

TEST(Mlp, OrthogonalInitRowsOrthonormal) {
  Rng rng(5);
  const Mlp m({8, 16, 4});
  const VectorXd theta = m.orthogonal_init(rng, 1.0, 0.5);
  const Eigen::Map<const MatrixXd> w0(theta.data(), 16, 8);
  EXPECT_TRUE((w0.transpose() * w0).isApprox(MatrixXd::Identity(8, 8), 1e-12));
  const Eigen::Map<const MatrixXd> w1(theta.data() + 16 * 8 + 16, 4, 16);
  EXPECT_TRUE((w1 * w1.transpose()).isApprox(0.25 * MatrixXd::Identity(4, 4), 1e-12));
  EXPECT_EQ(theta.segment(16 * 8, 16), VectorXd::Zero(16));
}

TEST(Policy, ZeroNetworkGivesUnitGaussian) {
  const PolicyNetwork p(8, 2);
  const auto [mean, std] = p.forward(VectorXd::Random(8));
  EXPECT_EQ(mean, VectorXd::Zero(2));
  EXPECT_EQ(std, VectorXd::Ones(2));
}

TEST(Policy, StdStaysWithinClamp) {
  Rng rng(6);
  PolicyNetwork p(4, 2, {8, 8});
  p.theta = p.mlp().orthogonal_init(rng, 5.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const auto [mean, std] = p.forward(VectorXd::NullaryExpr(4, [&] { return 10 * rng.normal(); }));
    ASSERT_TRUE((std.array() >= std::exp(kLogStdMin) - 1e-15).all());
    ASSERT_TRUE((std.array() <= std::exp(kLogStdMax) + 1e-12).all());
  }
}

TEST(Policy, ForwardIsDeterministicAndChecksDimension) {
  Rng rng(7);
  PolicyNetwork p(8, 2);
  p.initialize(rng);
  const VectorXd o = VectorXd::Random(8);
  EXPECT_EQ(p.forward(o), p.forward(o));
  EXPECT_THROW(p.forward(VectorXd::Zero(7)), std::invalid_argument);
}

TEST(Gaussian, SampleWithMinimumStdIsTight) {
  Rng rng(8);
  const VectorXd mean = vec({0.3, -0.2});
  const VectorXd std = VectorXd::Constant(2, std::exp(kLogStdMin));
  for (int i = 0; i < 1000; ++i) {
    EXPECT_LE((sample_action(mean, std, rng) - mean).cwiseAbs().maxCoeff(), 6 * std[0]);
  }
}

TEST(Gaussian, SamplingIsReproducibleAndUnbiased) {
  Rng a(9), b(9);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_action(VectorXd::Zero(2), VectorXd::Ones(2), a),
                                          sample_action(VectorXd::Zero(2), VectorXd::Ones(2), b));
  Rng rng(10);
  const int n = 100000;
  double sum = 0;
  for (int i = 0; i < n; ++i) sum += sample_action(vec({1.5}), vec({2.0}), rng)[0];
  EXPECT_NEAR(sum / n, 1.5, 3 * 2.0 / std::sqrt(n));
}

TEST(Gaussian, LogProbClosedForms) {
  EXPECT_NEAR(log_prob(vec({0}), vec({1}), vec({0})), -0.5 * std::log(2 * std::numbers::pi), 1e-15);
  EXPECT_NEAR(log_prob(vec({0}), vec({1}), vec({0})), -0.9189385332, 1e-10);
  EXPECT_NEAR(log_prob(vec({3.2}), vec({0.7}), vec({2.5})), log_prob(vec({0}), vec({0.7}), vec({-0.7})), 1e-14);
  const double joint = log_prob(vec({0.1, -1}), vec({0.5, 2}), vec({0.4, 0.3}));
  EXPECT_NEAR(joint, log_prob(vec({0.1}), vec({0.5}), vec({0.4})) + log_prob(vec({-1}), vec({2}), vec({0.3})), 1e-14);
}

TEST(Gaussian, KlClosedForms) {
  EXPECT_EQ(gaussian_kl(vec({0.3}), vec({1.2}), vec({0.3}), vec({1.2})), 0.0);
  EXPECT_NEAR(gaussian_kl(vec({1}), vec({1}), vec({0}), vec({1})), 0.5, 1e-15);
  EXPECT_NEAR(gaussian_kl(vec({0}), vec({2}), vec({0}), vec({1})), 2 - 0.5 - std::log(2.0), 1e-15);
  EXPECT_NEAR(gaussian_kl(vec({0}), vec({2}), vec({0}), vec({1})), 0.8069, 1e-4);
}

TEST(Returns, Examples) {
  const std::vector<double> ones{-1, -1, -1};
  EXPECT_NEAR(compute_returns(ones, 0.995)[0], -2.985025, 1e-12);
  const std::vector<double> r{0.5, -2, 3};
  EXPECT_EQ(compute_returns(r, 0.0), vec({0.5, -2, 3}));
  const std::vector<double> zeros(5, 0.0);
  EXPECT_EQ(compute_returns(zeros, 0.995), VectorXd::Zero(5));
}

TEST(Returns, BatchesDoNotBootstrapAcrossEpisodes) {
  EpisodeLog a, b;
  for (int t = 0; t < 3; ++t) {
    a.observations.push_back(VectorXd::Zero(1));
    a.actions.push_back(VectorXd::Zero(1));
    a.rewards.push_back(-1);
    b.observations.push_back(VectorXd::Zero(1));
    b.actions.push_back(VectorXd::Zero(1));
    b.rewards.push_back(-10);
  }
  const Batch batch = make_batch({a, b}, 0.5);
  EXPECT_EQ(batch.episode_starts, (std::vector<Eigen::Index>{0, 3}));
  EXPECT_NEAR(batch.returns[2], -1.0, 1e-15);
  EXPECT_NEAR(batch.returns[0], -1.75, 1e-15);
  EXPECT_NEAR(batch.returns[3], -17.5, 1e-15);
}

TEST(Advantages, Examples) {
  const VectorXd g = vec({-3, -1, 0, 2, 7});
  EXPECT_EQ(compute_advantages(g, g), VectorXd::Zero(5));
  const VectorXd a = compute_advantages(g, VectorXd::Zero(5));
  EXPECT_NEAR(a.mean(), 0.0, 1e-14);
  EXPECT_NEAR((a.array() - a.mean()).square().mean(), 1.0, 1e-7);
  // The 1e-8 guard sits in the denominator.
  const double sd = std::sqrt((g.array() - g.mean()).square().mean());
  EXPECT_NEAR(a[4], (7 - g.mean()) / (sd + 1e-8), 1e-12);
}

TEST(ConjugateGradient, TwoByTwo) {
  Eigen::Matrix2d a;
  a << 4, 1, 1, 3;
  const VectorXd x = conjugate_gradient([&](const VectorXd& v) { return VectorXd(a * v); }, vec({1, 2}), 10);
  EXPECT_NEAR(x[0], 1.0 / 11, 1e-12);
  EXPECT_NEAR(x[1], 7.0 / 11, 1e-12);
  EXPECT_EQ(conjugate_gradient([&](const VectorXd& v) { return VectorXd(a * v); }, VectorXd::Zero(2), 10),
            VectorXd::Zero(2));
}

TEST(ConjugateGradient, RandomSpdSystems) { EXPECT_LE(oracle::cg_worst_residual(20, 50, 3), 1e-8); }

TEST(ConjugateGradient, RejectsIndefiniteOperator) {
  EXPECT_THROW(conjugate_gradient([](const VectorXd& v) { return VectorXd(-v); }, vec({1, 1}), 5), std::runtime_error);
}

TEST(PolicyGradients, MatchFiniteDifferences) {
  const auto rep = oracle::check_policy_gradients(25, 11);
  EXPECT_LT(rep.surrogate, 1e-4);
  EXPECT_LT(rep.kl, 1e-4);
  EXPECT_LT(rep.fvp, 1e-4);
}

namespace {

// One-dimensional bandit: a constant observation, advantages rewarding
// actions above the current mean.
Batch bandit_batch(const PolicyNetwork& p, Rng& rng, int n) {
  Batch b;
  b.observations = MatrixXd::Ones(p.obs_dim(), n);
  b.actions.resize(1, n);
  const auto [mean, std] = p.forward(b.observations.col(0));
  for (int i = 0; i < n; ++i) b.actions(0, i) = mean[0] + std[0] * rng.normal();
  b.rewards = VectorXd::Zero(n);
  b.returns = VectorXd::Zero(n);
  b.values = VectorXd::Zero(n);
  b.advantages = (b.actions.row(0).array() > mean[0]).cast<double>().matrix().transpose();
  b.advantages = compute_advantages(b.advantages, VectorXd::Zero(n));
  return b;
}

}  // namespace

TEST(TrpoUpdate, ZeroAdvantagesLeaveParameters) {
  Rng rng(12);
  PolicyNetwork p(3, 1, {4, 4});
  p.initialize(rng);
  Batch b = bandit_batch(p, rng, 50);
  b.advantages.setZero();
  const VectorXd before = p.theta;
  const auto stats = trpo_update(p, b, TrpoConfig{});
  EXPECT_FALSE(stats.accepted);
  EXPECT_EQ(p.theta, before);
}

TEST(TrpoUpdate, BanditMeanShiftsUpWithinTrustRegion) {
  Rng rng(13);
  PolicyNetwork p(2, 1, {2, 2});  // 2*2+2 + 2*2+2 + 2*2+2 = 18 parameters
  p.initialize(rng);
  const Batch b = bandit_batch(p, rng, 200);
  const double mean_before = p.forward(b.observations.col(0)).first[0];

  // The analytic gradient agrees in sign with the finite-difference oracle.
  const PolicyOutput old = p.evaluate(p.theta, b.observations);
  const VectorXd old_logp = log_prob_batch(old.mean, old.std, b.actions);
  const VectorXd g = surrogate_and_grad(p, p.theta, b.observations, b.actions, b.advantages, old_logp).second;
  const VectorXd gfd = oracle::fd_gradient(
      [&](const VectorXd& th) {
        return surrogate_and_grad(p, th, b.observations, b.actions, b.advantages, old_logp).first;
      },
      p.theta);
  EXPECT_GT(g.dot(gfd), 0.0);

  const TrpoConfig cfg;
  const auto stats = trpo_update(p, b, cfg);
  ASSERT_TRUE(stats.accepted) << stats.diagnostic;
  EXPECT_GT(p.forward(b.observations.col(0)).first[0], mean_before);
  EXPECT_LE(stats.kl, 1.1 * cfg.delta);
  EXPECT_GT(stats.surrogate_after, stats.surrogate_before);
  const PolicyOutput now = p.evaluate(p.theta, b.observations);
  EXPECT_NEAR(mean_kl(old.mean, old.std, now.mean, now.std), stats.kl, 1e-12);
}

TEST(TrpoUpdateProperty, AcceptedStepsRespectTrustRegion) {
  Rng rng(14);
  const TrpoConfig cfg;
  int accepted = 0;
  for (int k = 0; k < 30; ++k) {
    PolicyNetwork p(4, 2, {16, 16});
    p.initialize(rng);
    Batch b;
    const int n = 300;
    b.observations = MatrixXd::NullaryExpr(4, n, [&] { return rng.normal(); });
    b.actions = MatrixXd::NullaryExpr(2, n, [&] { return rng.normal(); });
    b.advantages = compute_advantages(VectorXd::NullaryExpr(n, [&] { return rng.normal(); }) +
                                          b.actions.row(0).transpose(),
                                      VectorXd::Zero(n));
    const auto stats = trpo_update(p, b, cfg);
    if (stats.accepted) {
      ++accepted;
      EXPECT_LE(stats.kl, 1.1 * cfg.delta);
      EXPECT_GT(stats.surrogate_after, stats.surrogate_before);
    }
  }
  EXPECT_GT(accepted, 20);
}

TEST(TrpoConfig, ValidationNamesField) {
  TrpoConfig c;
  c.gamma = 1.5;
  try {
    c.validate();
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("gamma"), std::string::npos);
  }
}

TEST(Critic, FitsConstantReturns) {
  Rng rng(15);
  CriticNetwork c(8);
  c.initialize(rng);
  const MatrixXd obs = MatrixXd::NullaryExpr(8, 500, [&] { return rng.uniform(-1, 1); });
  const VectorXd returns = VectorXd::Constant(500, -12.0);
  TrpoConfig cfg;
  cfg.critic_epochs = 300;
  AdamState adam;
  const auto stats = critic_fit(c, obs, returns, cfg, rng, adam);
  EXPECT_TRUE(stats.applied);
  EXPECT_LT((c.predict(obs).array() + 12.0).abs().maxCoeff(), 0.1 * 12.0);
}

TEST(Critic, ZeroEpochsIsNoOp) {
  Rng rng(16);
  CriticNetwork c(4);
  c.initialize(rng);
  const VectorXd before = c.phi;
  TrpoConfig cfg;
  cfg.critic_epochs = 0;
  AdamState adam;
  critic_fit(c, MatrixXd::Random(4, 30), VectorXd::Random(30), cfg, rng, adam);
  EXPECT_EQ(c.phi, before);
}

TEST(Critic, LossDoesNotIncrease) {
  Rng rng(17);
  for (int k = 0; k < 10; ++k) {
    CriticNetwork c(4);
    c.initialize(rng);
    const MatrixXd obs = MatrixXd::NullaryExpr(4, 200, [&] { return rng.normal(); });
    const VectorXd returns = obs.row(0).transpose() * 3.0 - VectorXd::Constant(200, 5.0);
    AdamState adam;
    const auto stats = critic_fit(c, obs, returns, TrpoConfig{}, rng, adam);
    EXPECT_LE(stats.loss_after, stats.loss_before);
  }
}

TEST(Critic, NonFiniteTargetsLeaveParameters) {
  Rng rng(18);
  CriticNetwork c(4);
  c.initialize(rng);
  const VectorXd before = c.phi;
  VectorXd returns = VectorXd::Zero(20);
  returns[3] = std::numeric_limits<double>::infinity();
  AdamState adam;
  const auto stats = critic_fit(c, MatrixXd::Random(4, 20), returns, TrpoConfig{}, rng, adam);
  EXPECT_FALSE(stats.applied);
  EXPECT_EQ(c.phi, before);
}

TEST(Agent, LearningIsDeterministic) {
  auto run = [] {
    TrpoAgent agent(8, 2, TrpoConfig{}, Rng(1), Rng(2), Rng(3));
    Rng env(4);
    std::vector<EpisodeLog> batch(5);
    for (auto& ep : batch) {
      for (int t = 0; t < 20; ++t) {
        const VectorXd o = VectorXd::NullaryExpr(8, [&] { return env.normal(); });
        const VectorXd a = agent.act(o);
        ep.observations.push_back(o);
        ep.actions.push_back(a);
        ep.rewards.push_back(-a.squaredNorm());
      }
    }
    agent.learn(batch);
    return std::make_pair(agent.policy().theta, agent.critic().phi);
  };
  EXPECT_EQ(run(), run());
}

TEST(Checkpoint, RoundTripAndLayout) {
  Rng rng(19);
  PolicyNetwork p(8, 2);
  p.initialize(rng);
  const Checkpoint ck{p.mlp().sizes(), p.theta};
  const auto bytes = encode_checkpoint(ck);
  const std::size_t expect = 4 + 4 + 4 + 4 * ck.sizes.size() + 8 + 8 * static_cast<std::size_t>(p.theta.size());
  ASSERT_EQ(bytes.size(), expect);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "URNN");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[8], 3);  // three layers
  EXPECT_EQ(decode_checkpoint(bytes), ck);

  const auto path = std::filesystem::temp_directory_path() / "urlab_ckpt_test.bin";
  save_checkpoint(path, ck);
  EXPECT_EQ(load_checkpoint(path), ck);
  std::filesystem::remove(path);
}

TEST(Checkpoint, RejectsCorruptInput) {
  const Checkpoint ck{{2, 3, 1}, VectorXd::Ones(13)};
  auto bytes = encode_checkpoint(ck);
  auto truncated = bytes;
  truncated.pop_back();
  EXPECT_THROW(decode_checkpoint(truncated), CheckpointError);
  bytes[0] = 'X';
  EXPECT_THROW(decode_checkpoint(bytes), CheckpointError);
  EXPECT_THROW(encode_checkpoint(Checkpoint{{2, 3, 1}, VectorXd::Ones(5)}), CheckpointError);
}
