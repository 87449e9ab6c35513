#pragma once

#include <Eigen/Dense>
#include <utility>

namespace rgsl {

/// Trainable similarity model: a sparse feature selector, a linear
/// projection into a latent space, a Gaussian kernel width, and the
/// blend weight between raw and learned structure.
struct StructureParams {
  Eigen::MatrixXd projection;  // p x d, p <= d
  Eigen::VectorXd selector;    // length d
  double tau = 1.0;            // kernel window width, > 0
  double alpha = 0.0;          // blend weight in [0, 1]

  /// projection = (I_p | 0), selector = all-ones.
  static StructureParams identity_init(int d, int p, double tau, double alpha);
};

void validate_structure_params(const StructureParams& params, int d);

/// Kernel similarity and its degree vector; blended combination with the
/// raw adjacency.
struct LearnedGraph {
  Eigen::MatrixXd similarity;  // n x n, symmetric, in [0,1], zero diagonal
  Eigen::MatrixXd blended;     // (1-alpha) A + alpha similarity
  Eigen::VectorXd degree;      // row sums of similarity
};

/// Row i of the result is projection * (selector ∘ x_i).
Eigen::MatrixXd transform_features(const StructureParams& params,
                                   const Eigen::MatrixXd& x);

/// Squared Euclidean distances between rows via the Gram identity
/// D_ij = G_ii + G_jj - 2 G_ij; round-off negatives clamped to zero.
Eigen::MatrixXd pairwise_sq_distances(const Eigen::MatrixXd& xt);

/// similarity_ij = exp(-D_ij / (2 tau^2)) for i != j, zero diagonal;
/// degree = row sums. The blended matrix is left empty.
LearnedGraph similarity_matrix(const StructureParams& params,
                               const Eigen::MatrixXd& x);

/// Entry-wise convex combination (1-alpha) a + alpha a_tilde.
Eigen::MatrixXd blend_adjacency(const Eigen::MatrixXd& a,
                                const Eigen::MatrixXd& a_tilde, double alpha);

/// Element-wise soft-thresholding sgn(v) * max(|v| - threshold, 0).
Eigen::VectorXd prox_l1(const Eigen::VectorXd& v, double threshold);

/// Gradients of sum_ij upstream_ij * similarity_ij with respect to the
/// projection matrix and the selector. upstream must be symmetric with a
/// zero diagonal.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> kernel_gradients(
    const StructureParams& params, const Eigen::MatrixXd& x,
    const Eigen::MatrixXd& upstream);

}  // namespace rgsl
