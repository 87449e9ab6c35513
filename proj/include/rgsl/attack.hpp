#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "rgsl/graph.hpp"

namespace rgsl {

enum class AttackKind { random_flip, feature_difference };

AttackKind attack_kind_from_string(const std::string& name);
std::string to_string(AttackKind kind);

/// A structure-poisoning request: the budget is floor(rate * |E|) node pairs.
struct AttackSpec {
  AttackKind kind = AttackKind::random_flip;
  double rate = 0.0;  // in [0, 0.5]
  std::uint64_t seed = 0;
};

/// Toggles floor(rate*|E|) distinct off-diagonal pairs chosen uniformly from
/// all pairs. Output stays symmetric, binary, zero-diagonal.
Eigen::MatrixXd random_flip_attack(const Eigen::MatrixXd& a, double rate,
                                   std::uint64_t seed);

/// Adds floor(rate*|E|) edges between unconnected pairs, greedily by largest
/// feature distance (ties to the lexicographically smaller pair).
Eigen::MatrixXd feature_difference_attack(const Graph& g, double rate,
                                          std::uint64_t seed);

/// Dispatch on spec.kind.
Eigen::MatrixXd apply_attack(const Graph& g, const AttackSpec& spec);

/// Number of unordered pairs where the two matrices differ.
int pair_difference_count(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace rgsl
