#pragma once

#include <functional>

#include <Eigen/Core>

namespace urlab::trpo {

using LinearOperator = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Conjugate gradient for A x = b with A symmetric positive definite. Stops
/// after `iters` iterations or once the squared residual drops below
/// `residual_tol`. Throws std::runtime_error on non-finite intermediates.
Eigen::VectorXd conjugate_gradient(const LinearOperator& apply_a, const Eigen::VectorXd& b, int iters,
                                   double residual_tol = 1e-10);

}  // namespace urlab::trpo
