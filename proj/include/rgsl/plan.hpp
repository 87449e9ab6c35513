#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rgsl/attack.hpp"
#include "rgsl/graph.hpp"
#include "rgsl/trainer.hpp"

namespace rgsl {

/// Synthetic dataset request: block means are separation-scaled unit basis
/// vectors, so the number of blocks must not exceed the feature dimension.
struct SyntheticSpec {
  std::vector<int> sizes{30, 30};
  double p_in = 0.5;
  double p_out = 0.05;
  int feature_dim = 0;  // 0 means one dimension per block
  double separation = 2.0;
  double noise_sd = 0.5;
  double train_fraction = 0.1;
  std::uint64_t seed = 7;
};

Graph generate_synthetic(const SyntheticSpec& spec);

/// Full sweep description: dataset x attacks x methods x seeds.
struct ExperimentPlan {
  std::string dataset_path;  // empty means synthetic
  SyntheticSpec synthetic;
  std::vector<AttackKind> attack_kinds{AttackKind::feature_difference};
  std::vector<double> rates{0.0};
  std::uint64_t attack_seed = 99;
  std::vector<std::string> methods{"plain_gcn", "rgsla"};
  TrainConfig train;
  int repeat = 1;
  std::uint64_t base_seed = 1;
  std::string output_dir = "out";
  bool record_wall_ms = false;  // keeps results.csv byte-reproducible when off
  std::string save_adjacency;   // optional file for the last rgsla cell

  void validate() const;
};

/// Flat `key = value` text with [section] headers; `#` starts a comment.
/// Unknown keys are rejected. theta1..theta3 keys are converted to
/// gamma1/lambda1/gamma2 and cannot be mixed with them.
ExperimentPlan parse_plan_file(const std::string& path);
ExperimentPlan parse_plan_text(const std::string& text);

/// "none", "knn:<k>", or "epsilon:<x>".
PrunePolicy parse_prune_policy(const std::string& value);

Graph plan_dataset(const ExperimentPlan& plan);

struct ResultRow {
  std::string method;
  std::string attack;
  double rate = 0.0;
  std::uint64_t seed = 0;
  double accuracy = 0.0;
  double l_gnn = 0.0;
  double l_ss = 0.0;
  double l_align = 0.0;
  double wall_ms = 0.0;
};

/// Runs every (attack kind, rate, method, seed) cell in a fixed order.
std::vector<ResultRow> run_plan(const ExperimentPlan& plan,
                                Eigen::MatrixXd* last_rgsla_adjacency = nullptr);

/// RFC 4180 output: CRLF line endings, header row, minimal quoting.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows);

}  // namespace rgsl
