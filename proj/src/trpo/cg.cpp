#include "urlab/trpo/cg.hpp"

#include <cmath>
#include <stdexcept>

namespace urlab::trpo {

Eigen::VectorXd conjugate_gradient(const LinearOperator& apply_a, const Eigen::VectorXd& b, int iters,
                                   double residual_tol) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(b.size());
  Eigen::VectorXd r = b;
  Eigen::VectorXd p = r;
  double rr = r.squaredNorm();
  for (int i = 0; i < iters && rr >= residual_tol; ++i) {
    const Eigen::VectorXd ap = apply_a(p);
    const double pap = p.dot(ap);
    if (!std::isfinite(pap) || pap <= 0.0) {
      throw std::runtime_error("conjugate gradient: operator is not positive definite along a search direction");
    }
    const double alpha = rr / pap;
    x += alpha * p;
    r -= alpha * ap;
    const double rr_next = r.squaredNorm();
    if (!std::isfinite(rr_next)) throw std::runtime_error("conjugate gradient: non-finite residual");
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  return x;
}

}  // namespace urlab::trpo
