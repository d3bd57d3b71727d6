#pragma once

#include <array>
#include <cstdint>

#include <Eigen/Core>

#include "urlab/reacher/kinematics.hpp"
#include "urlab/rng.hpp"
#include "urlab/trpo/networks.hpp"

// Independent reference computations shared by the unit tests and the
// acceptance runner.
namespace urlab::oracle {

/// Flange position by plain 4x4 matrix products Rz Tz Tx Rx per row.
std::array<double, 3> naive_fk(const reacher::DhTable& dh, const ursim::Vec6& q);

/// Largest |fk - naive_fk| component over `samples` random configurations.
double fk_max_error(int samples, std::uint64_t seed);

/// Small random policy with log-std heads kept well inside the clamp.
struct SmallPolicyCase {
  trpo::PolicyNetwork policy;
  Eigen::VectorXd theta;
  Eigen::MatrixXd obs;
  Eigen::MatrixXd actions;
  Eigen::VectorXd advantages;
  Eigen::VectorXd old_logp;
  Eigen::MatrixXd old_mean;
  Eigen::MatrixXd old_std;
};

SmallPolicyCase make_small_policy_case(Rng& rng);

/// ||a - b|| / max(||a||, ||b||, floor)
double relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double floor = 1e-8);

/// Central finite-difference gradient.
template <typename F>
Eigen::VectorXd fd_gradient(F&& f, const Eigen::VectorXd& x, double h = 1e-5) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd y = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    y[i] = x[i] + h;
    const double up = f(y);
    y[i] = x[i] - h;
    const double down = f(y);
    y[i] = x[i];
    g[i] = (up - down) / (2 * h);
  }
  return g;
}

struct GradientReport {
  double surrogate = 0.0;  // worst relative error over cases
  double kl = 0.0;
  double fvp = 0.0;
};

/// Surrogate/KL gradients and Fisher-vector products against finite
/// differences on `cases` random small networks.
GradientReport check_policy_gradients(int cases, std::uint64_t seed);

/// Worst ||Ax - b|| / ||b|| of conjugate gradient on random SPD systems.
double cg_worst_residual(int systems, int dim, std::uint64_t seed);

struct SmootherReport {
  bool examples = false;
  bool bounded = false;
  std::int64_t steps = 0;
};

/// Worked smoother examples plus `steps` random steps checking the clips.
SmootherReport check_smoother(std::int64_t steps, std::uint64_t seed);

}  // namespace urlab::oracle
