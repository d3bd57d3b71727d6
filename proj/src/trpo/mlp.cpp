#include "urlab/trpo/mlp.hpp"

#include <stdexcept>
#include <string>

#include <Eigen/QR>

namespace urlab::trpo {
namespace {

using ConstMap = Eigen::Map<const MatrixXd>;
using ConstVecMap = Eigen::Map<const VectorXd>;

}  // namespace

Mlp::Mlp(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("an MLP needs input and output sizes");
  for (int s : sizes_) {
    if (s <= 0) throw std::invalid_argument("MLP layer sizes must be positive");
  }
  for (int l = 0; l < num_layers(); ++l) {
    offsets_.push_back(num_params_);
    num_params_ += static_cast<Eigen::Index>(sizes_[l]) * sizes_[l + 1] + sizes_[l + 1];
  }
}

void Mlp::check(const VectorXd& theta) const {
  if (theta.size() != num_params_) {
    throw std::invalid_argument("parameter vector has " + std::to_string(theta.size()) + " entries, expected " +
                                std::to_string(num_params_));
  }
}

MatrixXd Mlp::forward(const VectorXd& theta, const MatrixXd& x, Cache* cache) const {
  check(theta);
  if (x.rows() != input_dim()) {
    throw std::invalid_argument("input has " + std::to_string(x.rows()) + " rows, expected " +
                                std::to_string(input_dim()));
  }
  if (cache) {
    cache->activations.clear();
    cache->activations.push_back(x);
  }
  MatrixXd a = x;
  for (int l = 0; l < num_layers(); ++l) {
    const ConstMap w(theta.data() + weight_offset(l), sizes_[l + 1], sizes_[l]);
    const ConstVecMap b(theta.data() + bias_offset(l), sizes_[l + 1]);
    MatrixXd z = w * a;
    z.colwise() += b;
    if (l + 1 < num_layers()) z = z.array().tanh().matrix();
    a = std::move(z);
    if (cache) cache->activations.push_back(a);
  }
  return a;
}

VectorXd Mlp::backward(const VectorXd& theta, const Cache& cache, const MatrixXd& d_out) const {
  check(theta);
  VectorXd grad = VectorXd::Zero(num_params_);
  MatrixXd delta = d_out;
  for (int l = num_layers() - 1; l >= 0; --l) {
    const MatrixXd& a_in = cache.activations[l];
    Eigen::Map<MatrixXd>(grad.data() + weight_offset(l), sizes_[l + 1], sizes_[l]).noalias() =
        delta * a_in.transpose();
    grad.segment(bias_offset(l), sizes_[l + 1]) = delta.rowwise().sum();
    if (l > 0) {
      const ConstMap w(theta.data() + weight_offset(l), sizes_[l + 1], sizes_[l]);
      MatrixXd back = w.transpose() * delta;
      delta = back.array() * (1.0 - a_in.array().square());
    }
  }
  return grad;
}

MatrixXd Mlp::jvp(const VectorXd& theta, const Cache& cache, const VectorXd& v) const {
  check(theta);
  check(v);
  const Eigen::Index n = cache.activations.front().cols();
  MatrixXd tangent = MatrixXd::Zero(input_dim(), n);
  for (int l = 0; l < num_layers(); ++l) {
    const ConstMap w(theta.data() + weight_offset(l), sizes_[l + 1], sizes_[l]);
    const ConstMap dw(v.data() + weight_offset(l), sizes_[l + 1], sizes_[l]);
    const ConstVecMap db(v.data() + bias_offset(l), sizes_[l + 1]);
    MatrixXd dz = dw * cache.activations[l];
    if (l > 0) dz.noalias() += w * tangent;
    dz.colwise() += db;
    if (l + 1 < num_layers()) {
      tangent = dz.array() * (1.0 - cache.activations[l + 1].array().square());
    } else {
      tangent = std::move(dz);
    }
  }
  return tangent;
}

VectorXd Mlp::orthogonal_init(Rng& rng, double hidden_gain, double output_gain) const {
  VectorXd theta = VectorXd::Zero(num_params_);
  for (int l = 0; l < num_layers(); ++l) {
    const int rows = sizes_[l + 1], cols = sizes_[l];
    const int big = std::max(rows, cols), small = std::min(rows, cols);
    MatrixXd g(big, small);
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = rng.normal();
    }
    Eigen::HouseholderQR<MatrixXd> qr(g);
    MatrixXd q = qr.householderQ() * MatrixXd::Identity(big, small);
    // Sign fix so the factorization is unique.
    const MatrixXd r = qr.matrixQR().topRows(small).triangularView<Eigen::Upper>();
    for (int k = 0; k < small; ++k) {
      if (r(k, k) < 0.0) q.col(k) *= -1.0;
    }
    const MatrixXd w = rows >= cols ? q : MatrixXd(q.transpose());
    const double gain = (l + 1 < num_layers()) ? hidden_gain : output_gain;
    Eigen::Map<MatrixXd>(theta.data() + weight_offset(l), rows, cols) = gain * w;
  }
  return theta;
}

}  // namespace urlab::trpo
