#include "rgsl/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rgsl/errors.hpp"
#include "rgsl/rng.hpp"

namespace rgsl {

int Graph::edge_count() const {
  int count = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (adjacency(i, j) != 0.0) ++count;
  return count;
}

void validate_graph(const Graph& g) {
  if (g.n <= 0) throw ValidationError("graph: node count must be positive");
  if (g.d <= 0) throw ValidationError("graph: feature dimension must be positive");
  if (g.num_classes <= 0) throw ValidationError("graph: num_classes must be positive");
  if (g.features.rows() != g.n || g.features.cols() != g.d)
    throw ValidationError("graph: feature matrix shape mismatch");
  if (g.adjacency.rows() != g.n || g.adjacency.cols() != g.n)
    throw ValidationError("graph: adjacency shape mismatch");
  if (g.labels.size() != g.n) throw ValidationError("graph: label vector length mismatch");
  if (g.train_mask.size() != g.n || g.test_mask.size() != g.n)
    throw ValidationError("graph: mask length mismatch");
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      const double v = g.adjacency(i, j);
      if (v != 0.0 && v != 1.0)
        throw ValidationError("graph: adjacency entries must be 0 or 1");
      if (g.adjacency(i, j) != g.adjacency(j, i))
        throw ValidationError("graph: adjacency must be symmetric");
    }
    if (g.adjacency(i, i) != 0.0)
      throw ValidationError("graph: adjacency diagonal must be zero");
    if (g.labels[i] < 0 || g.labels[i] >= g.num_classes)
      throw ValidationError("graph: label out of range at node " + std::to_string(i));
    if (g.train_mask[i] && g.test_mask[i])
      throw ValidationError("graph: masks overlap at node " + std::to_string(i));
  }
  if (g.train_count() == 0) throw ValidationError("graph: train mask is empty");
}

NormalizedAdjacency normalize_adjacency(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw ValidationError("normalize_adjacency: matrix must be square");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < i; ++j)
      if (std::abs(a(i, j) - a(j, i)) > 1e-12 * scale)
        throw ValidationError("normalize_adjacency: input not symmetric");
  if (a.minCoeff() < 0.0)
    throw ValidationError("normalize_adjacency: input has negative entries");

  // Row sums of A + I are positive, so the scaling is always defined.
  Eigen::VectorXd inv_sqrt_deg(n);
  for (Eigen::Index i = 0; i < n; ++i)
    inv_sqrt_deg[i] = 1.0 / std::sqrt(a.row(i).sum() + 1.0);

  NormalizedAdjacency out;
  out.matrix.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.matrix(i, i) = inv_sqrt_deg[i] * inv_sqrt_deg[i];
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = a(i, j) * inv_sqrt_deg[i] * inv_sqrt_deg[j];
      out.matrix(i, j) = v;
      out.matrix(j, i) = v;
    }
  }
  return out;
}

Eigen::MatrixXd prune_knn(const Eigen::MatrixXd& w, int k) {
  const Eigen::Index n = w.rows();
  if (w.cols() != n) throw ValidationError("prune_knn: matrix must be square");
  if (k <= 0) throw ValidationError("prune_knn: k must be positive");
  if (w.minCoeff() < 0.0) throw ValidationError("prune_knn: negative weights");

  if (k >= n) {
    Eigen::MatrixXd out = w;
    out.diagonal().setZero();
    return out;
  }

  Eigen::MatrixXd kept = Eigen::MatrixXd::Zero(n, n);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    order.clear();
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) order.push_back(j);
    // Larger weight first; ties resolved toward the lower column index.
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      if (w(i, a) != w(i, b)) return w(i, a) > w(i, b);
      return a < b;
    });
    for (int r = 0; r < k; ++r) kept(i, order[static_cast<std::size_t>(r)]) = w(i, order[static_cast<std::size_t>(r)]);
  }
  return kept.cwiseMax(kept.transpose().eval());
}

Eigen::MatrixXd prune_epsilon(const Eigen::MatrixXd& w, double eps) {
  if (w.rows() != w.cols()) throw ValidationError("prune_epsilon: matrix must be square");
  if (eps < 0.0) throw ValidationError("prune_epsilon: eps must be nonnegative");
  return (w.array() < eps).select(0.0, w);
}

Eigen::VectorXd homophily_ratios(const Graph& g, const Eigen::MatrixXd& w) {
  if (w.rows() != g.n || w.cols() != g.n)
    throw ValidationError("homophily_ratios: matrix shape mismatch");
  Eigen::VectorXd r = Eigen::VectorXd::Zero(g.n);
  for (int j = 0; j < g.n; ++j) {
    int neighbors = 0;
    int same = 0;
    for (int i = 0; i < g.n; ++i) {
      if (i == j || w(i, j) <= 0.0) continue;
      ++neighbors;
      if (g.labels[i] == g.labels[j]) ++same;
    }
    r[j] = neighbors == 0 ? 0.0 : static_cast<double>(same) / neighbors;
  }
  return r;
}

Graph sbm_generate(const std::vector<int>& sizes, double p_in, double p_out,
                   const Eigen::MatrixXd& feature_means, double noise_sd,
                   std::uint64_t seed, double train_fraction) {
  const int blocks = static_cast<int>(sizes.size());
  if (blocks == 0) throw ValidationError("sbm_generate: no blocks given");
  for (int s : sizes)
    if (s <= 0) throw ValidationError("sbm_generate: empty block");
  if (!(0.0 <= p_out && p_out <= p_in && p_in <= 1.0))
    throw ValidationError("sbm_generate: need 0 <= p_out <= p_in <= 1");
  if (feature_means.rows() != blocks)
    throw ValidationError("sbm_generate: one feature-mean row per block required");
  if (noise_sd < 0.0) throw ValidationError("sbm_generate: negative noise_sd");
  if (!(train_fraction > 0.0 && train_fraction <= 1.0))
    throw ValidationError("sbm_generate: train_fraction must be in (0, 1]");

  Graph g;
  g.num_classes = blocks;
  g.d = static_cast<int>(feature_means.cols());
  g.n = std::accumulate(sizes.begin(), sizes.end(), 0);

  g.labels.resize(g.n);
  int node = 0;
  for (int b = 0; b < blocks; ++b)
    for (int s = 0; s < sizes[b]; ++s) g.labels[node++] = b;

  Rng rng(seed);
  g.features.resize(g.n, g.d);
  for (int i = 0; i < g.n; ++i)
    for (int f = 0; f < g.d; ++f)
      g.features(i, f) = feature_means(g.labels[i], f) + noise_sd * rng.normal();

  g.adjacency = Eigen::MatrixXd::Zero(g.n, g.n);
  for (int i = 0; i < g.n; ++i) {
    for (int j = i + 1; j < g.n; ++j) {
      const double p = g.labels[i] == g.labels[j] ? p_in : p_out;
      if (rng.uniform() < p) {
        g.adjacency(i, j) = 1.0;
        g.adjacency(j, i) = 1.0;
      }
    }
  }

  // Stratified split: ceil(fraction * block size) train nodes per block.
  g.train_mask = BoolVec::Constant(g.n, false);
  g.test_mask = BoolVec::Constant(g.n, false);
  int base = 0;
  for (int b = 0; b < blocks; ++b) {
    std::vector<int> ids(static_cast<std::size_t>(sizes[b]));
    std::iota(ids.begin(), ids.end(), base);
    rng.shuffle(ids);
    const int n_train = std::min<int>(
        sizes[b], static_cast<int>(std::ceil(train_fraction * sizes[b])));
    for (int s = 0; s < sizes[b]; ++s) {
      if (s < n_train)
        g.train_mask[ids[static_cast<std::size_t>(s)]] = true;
      else
        g.test_mask[ids[static_cast<std::size_t>(s)]] = true;
    }
    base += sizes[b];
  }

  validate_graph(g);
  return g;
}

}  // namespace rgsl
