#include "rgsl/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "rgsl/errors.hpp"

namespace rgsl {

std::vector<std::vector<int>> neighbor_lists(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<std::vector<int>> lists(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (j != i && a(i, j) > 0.0) lists[static_cast<std::size_t>(i)].push_back(j);
  return lists;
}

int modal_degree(const Eigen::MatrixXd& a) {
  std::map<int, int> counts;
  for (const auto& list : neighbor_lists(a)) ++counts[static_cast<int>(list.size())];
  int best_degree = 0;
  int best_count = -1;
  for (const auto& [degree, count] : counts) {
    if (count > best_count) {
      best_degree = degree;
      best_count = count;
    }
  }
  return best_degree;
}

namespace {

double derived_max_feature_norm(const Eigen::MatrixXd& x,
                                const BoundParams& params) {
  if (params.max_feature_norm > 0.0) return params.max_feature_norm;
  return x.rowwise().norm().maxCoeff();
}

double min_alignment_term(const NormalizedAdjacency& n_adj,
                          const Eigen::MatrixXd& x,
                          const std::vector<std::vector<int>>& neighbors,
                          const std::vector<int>& eval_nodes) {
  const Eigen::MatrixXd& n_mat = n_adj.matrix;
  double best = std::numeric_limits<double>::infinity();
  for (int k : eval_nodes) {
    Eigen::VectorXd agg = Eigen::VectorXd::Zero(x.cols());
    double weight_sum = 0.0;
    for (int j : neighbors[static_cast<std::size_t>(k)]) {
      agg += n_mat(j, k) * x.row(j).transpose();
      weight_sum += n_mat(k, j);
    }
    best = std::min(best, agg.norm() * weight_sum);
  }
  return best;
}

}  // namespace

double rademacher_lower_bound(const NormalizedAdjacency& n_adj,
                              const Eigen::MatrixXd& x, const BoundParams& params,
                              const std::vector<std::vector<int>>& neighbors) {
  const int n = static_cast<int>(n_adj.matrix.rows());
  if (x.rows() != n) throw ValidationError("rademacher_lower_bound: feature rows mismatch");
  if (static_cast<int>(neighbors.size()) != n)
    throw ValidationError("rademacher_lower_bound: neighbor list count mismatch");
  if (params.labeled_count < 1)
    throw ValidationError("rademacher_lower_bound: labeled count must be >= 1");
  if (params.common_degree < 1)
    throw ValidationError("rademacher_lower_bound: common degree must be >= 1");
  for (int i = 0; i < n; ++i) {
    const auto& list = neighbors[static_cast<std::size_t>(i)];
    if (static_cast<int>(list.size()) != params.common_degree)
      throw ValidationError("rademacher_lower_bound: node " + std::to_string(i) +
                            " has degree " + std::to_string(list.size()) +
                            ", expected q = " + std::to_string(params.common_degree));
    for (int j : list)
      if (j < 0 || j >= n)
        throw ValidationError("rademacher_lower_bound: neighbor index out of range");
  }

  std::vector<int> all_nodes(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all_nodes[static_cast<std::size_t>(i)] = i;
  const double b = derived_max_feature_norm(x, params);
  const double prefactor = params.lipschitz * params.lipschitz * b *
                           params.norm_w2 * params.norm_w1 /
                           std::sqrt(static_cast<double>(params.labeled_count));
  return prefactor * min_alignment_term(n_adj, x, neighbors, all_nodes);
}

double rademacher_lower_bound_modal(const Eigen::MatrixXd& adjacency,
                                    const NormalizedAdjacency& n_adj,
                                    const Eigen::MatrixXd& x, BoundParams params) {
  const auto neighbors = neighbor_lists(adjacency);
  const int q = modal_degree(adjacency);
  if (q < 1)
    throw ValidationError("rademacher_lower_bound_modal: modal degree is zero");
  std::vector<int> eval_nodes;
  for (int i = 0; i < static_cast<int>(neighbors.size()); ++i)
    if (static_cast<int>(neighbors[static_cast<std::size_t>(i)].size()) == q)
      eval_nodes.push_back(i);

  params.common_degree = q;
  const double b = derived_max_feature_norm(x, params);
  const double prefactor = params.lipschitz * params.lipschitz * b *
                           params.norm_w2 * params.norm_w1 /
                           std::sqrt(static_cast<double>(params.labeled_count));
  return prefactor * min_alignment_term(n_adj, x, neighbors, eval_nodes);
}

double trc_upper_bound(const Eigen::MatrixXd& s, const Eigen::MatrixXd& x,
                       const BoundParams& params) {
  const int n = static_cast<int>(s.rows());
  if (s.cols() != n) throw ValidationError("trc_upper_bound: S must be square");
  if (x.rows() != n) throw ValidationError("trc_upper_bound: feature rows mismatch");
  const int m = params.labeled_count;
  if (m < 1 || m >= n)
    throw ValidationError("trc_upper_bound: need 1 <= m < n");
  if (params.layers < 1) throw ValidationError("trc_upper_bound: K must be >= 1");

  const double d = static_cast<double>(x.cols());
  const double c1 = 2.0 * params.lipschitz * params.bias_bound;
  const double c2 = 2.0 * params.lipschitz * params.weight_inf_bound;
  const double c3 = params.lipschitz * params.weight_inf_bound * std::sqrt(2.0 / d);

  const double s_inf = s.cwiseAbs().rowwise().sum().maxCoeff();
  const double sx_2inf = (s * x).rowwise().norm().maxCoeff();

  double series = 0.0;
  double power = 1.0;  // (c2 ||S||_inf)^k
  for (int k = 0; k < params.layers; ++k) {
    series += power;
    power *= c2 * s_inf;
  }
  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  return c1 * nn * nn / (mm * (nn - mm)) * series +
         c3 * power * sx_2inf * std::sqrt(std::log(nn));
}

double generalization_gap_bound(double trc, const BoundParams& params, double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw ValidationError("generalization_gap_bound: delta must lie in (0, 1)");
  const int n = params.total_count;
  const int m = params.labeled_count;
  if (m < 1 || m >= n)
    throw ValidationError("generalization_gap_bound: need 1 <= m < n");
  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  const double denom = mm * (nn - mm);
  return trc + kGapC4 * nn * std::sqrt(std::min(mm, nn - mm)) / denom +
         kGapC5 * std::sqrt(nn / denom * std::log(1.0 / delta));
}

}  // namespace rgsl
