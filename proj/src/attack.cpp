#include "rgsl/attack.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "rgsl/errors.hpp"
#include "rgsl/rng.hpp"

namespace rgsl {

AttackKind attack_kind_from_string(const std::string& name) {
  if (name == "random_flip") return AttackKind::random_flip;
  if (name == "feature_difference") return AttackKind::feature_difference;
  throw ValidationError("unknown attack kind: " + name);
}

std::string to_string(AttackKind kind) {
  return kind == AttackKind::random_flip ? "random_flip" : "feature_difference";
}

namespace {

void check_attack_input(const Eigen::MatrixXd& a, double rate) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw ValidationError("attack: adjacency must be square");
  if (!(rate >= 0.0 && rate <= 0.5))
    throw ValidationError("attack: rate must lie in [0, 0.5]");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (a(i, i) != 0.0) throw ValidationError("attack: nonzero diagonal");
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (a(i, j) != a(j, i)) throw ValidationError("attack: adjacency not symmetric");
      if (a(i, j) != 0.0 && a(i, j) != 1.0)
        throw ValidationError("attack: adjacency must be binary");
    }
  }
}

int edge_count(const Eigen::MatrixXd& a) {
  int count = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = i + 1; j < a.cols(); ++j)
      if (a(i, j) != 0.0) ++count;
  return count;
}

}  // namespace

Eigen::MatrixXd random_flip_attack(const Eigen::MatrixXd& a, double rate,
                                   std::uint64_t seed) {
  check_attack_input(a, rate);
  const Eigen::Index n = a.rows();
  const std::uint64_t budget =
      static_cast<std::uint64_t>(std::floor(rate * edge_count(a)));
  const std::uint64_t total_pairs =
      static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n - 1) / 2;
  if (budget > total_pairs)
    throw ValidationError("random_flip_attack: budget exceeds available pairs");

  Rng rng(seed);
  std::set<std::uint64_t> chosen;
  while (chosen.size() < budget) chosen.insert(rng.uniform_int(total_pairs));

  Eigen::MatrixXd out = a;
  for (std::uint64_t linear : chosen) {
    // Decode the linear index of an (i, j) pair with i < j.
    Eigen::Index i = 0;
    std::uint64_t remaining = linear;
    while (remaining >= static_cast<std::uint64_t>(n - 1 - i)) {
      remaining -= static_cast<std::uint64_t>(n - 1 - i);
      ++i;
    }
    const Eigen::Index j = i + 1 + static_cast<Eigen::Index>(remaining);
    const double flipped = out(i, j) == 0.0 ? 1.0 : 0.0;
    out(i, j) = flipped;
    out(j, i) = flipped;
  }
  return out;
}

Eigen::MatrixXd feature_difference_attack(const Graph& g, double rate,
                                          std::uint64_t seed) {
  (void)seed;  // the greedy choice is already deterministic
  check_attack_input(g.adjacency, rate);
  const int budget = static_cast<int>(std::floor(rate * g.edge_count()));

  struct Candidate {
    double sq_dist;
    int i, j;
  };
  std::vector<Candidate> candidates;
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j)
      if (g.adjacency(i, j) == 0.0)
        candidates.push_back(
            {(g.features.row(i) - g.features.row(j)).squaredNorm(), i, j});

  if (static_cast<int>(candidates.size()) < budget)
    throw ValidationError("feature_difference_attack: insufficient unconnected pairs");

  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.sq_dist != b.sq_dist) return a.sq_dist > b.sq_dist;
              if (a.i != b.i) return a.i < b.i;
              return a.j < b.j;
            });

  Eigen::MatrixXd out = g.adjacency;
  for (int e = 0; e < budget; ++e) {
    out(candidates[static_cast<std::size_t>(e)].i,
        candidates[static_cast<std::size_t>(e)].j) = 1.0;
    out(candidates[static_cast<std::size_t>(e)].j,
        candidates[static_cast<std::size_t>(e)].i) = 1.0;
  }
  return out;
}

Eigen::MatrixXd apply_attack(const Graph& g, const AttackSpec& spec) {
  return spec.kind == AttackKind::random_flip
             ? random_flip_attack(g.adjacency, spec.rate, spec.seed)
             : feature_difference_attack(g, spec.rate, spec.seed);
}

int pair_difference_count(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ValidationError("pair_difference_count: shape mismatch");
  int count = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = i + 1; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) ++count;
  return count;
}

}  // namespace rgsl
