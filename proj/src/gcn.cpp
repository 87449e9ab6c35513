#include "rgsl/gcn.hpp"

#include <cmath>

#include "rgsl/errors.hpp"
#include "rgsl/rng.hpp"

namespace rgsl {

GcnParams glorot_init(int d, int k, int num_classes, std::uint64_t seed) {
  if (d <= 0 || k <= 0 || num_classes <= 0)
    throw ValidationError("glorot_init: dimensions must be positive");
  Rng rng(seed);
  GcnParams params;
  params.w1.resize(d, k);
  params.w2.resize(k, num_classes);
  const double bound1 = std::sqrt(6.0 / (d + k));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < k; ++j) params.w1(i, j) = rng.uniform(-bound1, bound1);
  const double bound2 = std::sqrt(6.0 / (k + num_classes));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < num_classes; ++j)
      params.w2(i, j) = rng.uniform(-bound2, bound2);
  return params;
}

ForwardCache forward(const GcnParams& params, const NormalizedAdjacency& n_adj,
                     const Eigen::MatrixXd& x) {
  const Eigen::MatrixXd& n = n_adj.matrix;
  if (n.rows() != x.rows()) throw ValidationError("forward: adjacency/feature row mismatch");
  if (x.cols() != params.w1.rows()) throw ValidationError("forward: W1 shape mismatch");
  if (params.w1.cols() != params.w2.rows()) throw ValidationError("forward: W2 shape mismatch");

  ForwardCache cache;
  cache.features = x;
  cache.normalized_adj = n;
  cache.pre_activation = n * (x * params.w1);
  if (!cache.pre_activation.allFinite())
    throw NumericError("forward: non-finite first-layer pre-activation");
  cache.hidden = cache.pre_activation.cwiseMax(0.0);
  cache.logits = n * (cache.hidden * params.w2);
  if (!cache.logits.allFinite())
    throw NumericError("forward: non-finite logits");

  const Eigen::Index rows = cache.logits.rows();
  cache.probs.resize(rows, cache.logits.cols());
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Eigen::RowVectorXd shifted =
        cache.logits.row(i).array() - cache.logits.row(i).maxCoeff();
    const Eigen::RowVectorXd exps = shifted.array().exp();
    cache.probs.row(i) = exps / exps.sum();
  }
  if (!cache.probs.allFinite())
    throw NumericError("forward: non-finite softmax output");
  return cache;
}

double masked_cross_entropy(const ForwardCache& cache,
                            const Eigen::VectorXi& labels, const BoolVec& mask) {
  const Eigen::Index n = cache.logits.rows();
  if (labels.size() != n || mask.size() != n)
    throw ValidationError("masked_cross_entropy: length mismatch");
  const Eigen::Index count = mask.count();
  if (count == 0) throw ValidationError("masked_cross_entropy: empty mask");

  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!mask[i]) continue;
    const double row_max = cache.logits.row(i).maxCoeff();
    const double lse =
        row_max + std::log((cache.logits.row(i).array() - row_max).exp().sum());
    total += lse - cache.logits(i, labels[i]);
  }
  return total / static_cast<double>(count);
}

GcnGradients backward(const GcnParams& params, const ForwardCache& cache,
                      const Eigen::VectorXi& labels, const BoolVec& mask) {
  const Eigen::Index n = cache.logits.rows();
  if (labels.size() != n || mask.size() != n)
    throw ValidationError("backward: length mismatch");
  const Eigen::Index count = mask.count();
  if (count == 0) throw ValidationError("backward: empty mask");

  // Fused softmax + cross-entropy: dZ2 = (P - onehot)/m on masked rows.
  Eigen::MatrixXd d_logits = Eigen::MatrixXd::Zero(n, cache.logits.cols());
  const double inv_count = 1.0 / static_cast<double>(count);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!mask[i]) continue;
    d_logits.row(i) = cache.probs.row(i) * inv_count;
    d_logits(i, labels[i]) -= inv_count;
  }

  const Eigen::MatrixXd& n_adj = cache.normalized_adj;
  GcnGradients grads;
  grads.w2 = (n_adj * cache.hidden).transpose() * d_logits;

  // Both aggregation steps contribute to dN: Z2 = N (H1 W2), Z1 = N (X W1).
  const Eigen::MatrixXd d_hidden =
      n_adj.transpose() * (d_logits * params.w2.transpose());
  const Eigen::MatrixXd d_pre =
      (cache.pre_activation.array() > 0.0).select(d_hidden, 0.0);

  grads.w1 = (n_adj * cache.features).transpose() * d_pre;
  grads.normalized_adj = d_logits * (cache.hidden * params.w2).transpose() +
                         d_pre * (cache.features * params.w1).transpose();
  return grads;
}

GcnParams sgd_step(const GcnParams& params, const GcnGradients& grads, double eta) {
  if (!(eta > 0.0)) throw ValidationError("sgd_step: eta must be positive");
  GcnParams out;
  out.w1 = params.w1 - eta * grads.w1;
  out.w2 = params.w2 - eta * grads.w2;
  return out;
}

}  // namespace rgsl
