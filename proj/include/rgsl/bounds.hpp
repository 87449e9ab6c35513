#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rgsl/graph.hpp"

namespace rgsl {

/// Norm constraints and graph quantities feeding the capacity bounds.
/// Derived constants (c1, c2, c3) are always recomputed from these fields.
struct BoundParams {
  double norm_w1 = 1.0;          // R: Frobenius bound on the first layer
  double norm_w2 = 1.0;          // D: spectral bound on the second layer
  double lipschitz = 1.0;        // activation Lipschitz constant
  double max_feature_norm = 0.0; // B; values <= 0 mean "derive from X"
  int common_degree = 0;         // q: shared neighbor count
  int labeled_count = 1;         // m
  int total_count = 2;           // n
  double bias_bound = 1.0;       // beta
  double weight_inf_bound = 1.0; // omega
  int layers = 2;                // K
};

/// Absolute constants of the generalization-gap bound (stated upper limits).
inline constexpr double kGapC4 = 5.05;
inline constexpr double kGapC5 = 0.8;

/// Ascending neighbor lists of the positive off-diagonal entries.
std::vector<std::vector<int>> neighbor_lists(const Eigen::MatrixXd& a);

/// Most frequent node degree (ties to the smaller degree).
int modal_degree(const Eigen::MatrixXd& a);

/// Capacity lower bound for a width-q-regular neighborhood structure:
///   (l^2 B D R / sqrt(m)) * min_k { || sum_j N_jk x_j ||_2 * sum_t N_kt }
/// with sums over the supplied neighbor list of node k. Every list must have
/// exactly params.common_degree entries.
double rademacher_lower_bound(const NormalizedAdjacency& n_adj,
                              const Eigen::MatrixXd& x, const BoundParams& params,
                              const std::vector<std::vector<int>>& neighbors);

/// Irregular-graph variant: q is the modal degree and the min runs only over
/// nodes with that degree, evaluated on the full graph.
double rademacher_lower_bound_modal(const Eigen::MatrixXd& adjacency,
                                    const NormalizedAdjacency& n_adj,
                                    const Eigen::MatrixXd& x, BoundParams params);

/// Transductive Rademacher complexity upper bound for a K-layer class:
///   (c1 n^2 / (m(n-m))) sum_{k<K} (c2 ||S||_inf)^k
///   + c3 (c2 ||S||_inf)^K ||SX||_{2->inf} sqrt(log n).
double trc_upper_bound(const Eigen::MatrixXd& s, const Eigen::MatrixXd& x,
                       const BoundParams& params);

/// trc + c4 n sqrt(min(m, n-m)) / (m(n-m)) + c5 sqrt(n ln(1/delta) / (m(n-m)))
/// with n and m taken from params.
double generalization_gap_bound(double trc, const BoundParams& params, double delta);

}  // namespace rgsl
