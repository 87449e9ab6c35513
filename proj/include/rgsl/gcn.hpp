#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "rgsl/graph.hpp"

namespace rgsl {

/// Two-layer GCN weights.
struct GcnParams {
  Eigen::MatrixXd w1;  // d x k
  Eigen::MatrixXd w2;  // k x C

  int hidden_width() const { return static_cast<int>(w1.cols()); }
};

/// Glorot-uniform initialization, reproducible per seed.
GcnParams glorot_init(int d, int k, int num_classes, std::uint64_t seed);

/// Intermediates of one forward pass, kept for backprop.
struct ForwardCache {
  Eigen::MatrixXd features;        // the X consumed
  Eigen::MatrixXd pre_activation;  // Z1 = N X W1
  Eigen::MatrixXd hidden;          // H1 = relu(Z1)
  Eigen::MatrixXd logits;          // Z2 = N H1 W2
  Eigen::MatrixXd probs;           // row softmax of Z2
  Eigen::MatrixXd normalized_adj;  // the N used
};

/// softmax(N * relu(N X W1) * W2) with per-row max subtraction.
ForwardCache forward(const GcnParams& params, const NormalizedAdjacency& n_adj,
                     const Eigen::MatrixXd& x);

/// Mean over masked nodes of -log P[i, y_i], computed from logits via
/// log-sum-exp.
double masked_cross_entropy(const ForwardCache& cache,
                            const Eigen::VectorXi& labels, const BoolVec& mask);

struct GcnGradients {
  Eigen::MatrixXd w1;
  Eigen::MatrixXd w2;
  Eigen::MatrixXd normalized_adj;  // treats every N entry as independent
};

/// Exact gradients of the masked cross-entropy. The adjacency gradient
/// accounts for both aggregation steps; ReLU subgradient at 0 is 0.
GcnGradients backward(const GcnParams& params, const ForwardCache& cache,
                      const Eigen::VectorXi& labels, const BoolVec& mask);

/// Plain descent step, out-of-place.
GcnParams sgd_step(const GcnParams& params, const GcnGradients& grads, double eta);

}  // namespace rgsl
