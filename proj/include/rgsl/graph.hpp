#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace rgsl {

using BoolVec = Eigen::Array<bool, Eigen::Dynamic, 1>;

/// A node-attributed undirected graph with a train/test split.
///
/// adjacency is dense symmetric binary with zero diagonal; labels take values
/// in [0, num_classes); masks are disjoint and the train mask is nonempty.
struct Graph {
  int n = 0;
  int d = 0;
  int num_classes = 0;
  Eigen::MatrixXd features;   // n x d
  Eigen::MatrixXd adjacency;  // n x n, entries in {0,1}
  Eigen::VectorXi labels;     // length n
  BoolVec train_mask;
  BoolVec test_mask;

  int train_count() const { return static_cast<int>(train_mask.count()); }
  int test_count() const { return static_cast<int>(test_mask.count()); }
  int edge_count() const;  // undirected edges (i < j)
};

/// Throws ValidationError if any Graph invariant is violated.
void validate_graph(const Graph& g);

/// Symmetrically normalized adjacency with self-loops.
struct NormalizedAdjacency {
  Eigen::MatrixXd matrix;  // n x n, symmetric, nonnegative
};

/// D^{-1/2} (A + I) D^{-1/2} with D the diagonal of row sums of A + I.
/// Accepts any nonnegative symmetric real matrix (raw binary or blended).
NormalizedAdjacency normalize_adjacency(const Eigen::MatrixXd& a);

/// Keeps each row's k largest off-diagonal weights (ties to the lower column
/// index), then symmetrizes by element-wise max with the transpose.
/// k >= n returns the input with a zeroed diagonal.
Eigen::MatrixXd prune_knn(const Eigen::MatrixXd& w, int k);

/// Zeroes entries strictly below eps; entries equal to eps survive.
Eigen::MatrixXd prune_epsilon(const Eigen::MatrixXd& w, double eps);

/// Per-node fraction of neighbors sharing the node's label, under the
/// adjacency-like matrix w (neighbors are off-diagonal entries > 0).
/// Isolated nodes get ratio 0.
Eigen::VectorXd homophily_ratios(const Graph& g, const Eigen::MatrixXd& w);

/// Stochastic-block-model instance: labels are block indices, features are
/// the block mean plus isotropic Gaussian noise. The split is stratified per
/// block (at least one train node per block). Bit-reproducible per seed.
Graph sbm_generate(const std::vector<int>& sizes, double p_in, double p_out,
                   const Eigen::MatrixXd& feature_means, double noise_sd,
                   std::uint64_t seed, double train_fraction = 0.1);

}  // namespace rgsl
