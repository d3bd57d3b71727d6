#pragma once

#include <vector>

#include <Eigen/Core>

#include "urlab/rng.hpp"

namespace urlab::trpo {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Fully connected network with tanh hidden layers and a linear output layer.
/// Parameters live in one flat vector; each layer contributes its weight
/// matrix (out x in, column-major) followed by its bias.
class Mlp {
 public:
  /// `sizes` = {input, hidden..., output}; at least two entries, all positive.
  explicit Mlp(std::vector<int> sizes);

  struct Cache {
    std::vector<MatrixXd> activations;  // [0] = input, then one per layer
  };

  const std::vector<int>& sizes() const { return sizes_; }
  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }
  int num_layers() const { return static_cast<int>(sizes_.size()) - 1; }
  Eigen::Index num_params() const { return num_params_; }

  /// Columns of `x` are samples. Fills `cache` when given.
  MatrixXd forward(const VectorXd& theta, const MatrixXd& x, Cache* cache = nullptr) const;

  /// Gradient of sum_i <d_out_i, f(x_i)> with respect to the parameters.
  VectorXd backward(const VectorXd& theta, const Cache& cache, const MatrixXd& d_out) const;

  /// Directional derivative of the outputs along parameter direction `v`.
  MatrixXd jvp(const VectorXd& theta, const Cache& cache, const VectorXd& v) const;

  /// Orthogonal weights scaled by `hidden_gain` (hidden layers) and
  /// `output_gain` (last layer); zero biases.
  VectorXd orthogonal_init(Rng& rng, double hidden_gain, double output_gain) const;

 private:
  Eigen::Index weight_offset(int layer) const { return offsets_[layer]; }
  Eigen::Index bias_offset(int layer) const { return offsets_[layer] + sizes_[layer] * sizes_[layer + 1]; }
  void check(const VectorXd& theta) const;

  std::vector<int> sizes_;
  std::vector<Eigen::Index> offsets_;
  Eigen::Index num_params_ = 0;
};

}  // namespace urlab::trpo
