#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "rgsl/gcn.hpp"
#include "rgsl/graph.hpp"
#include "rgsl/structure.hpp"

namespace rgsl {

enum class PruneKind { none, knn, epsilon };

struct PrunePolicy {
  PruneKind kind = PruneKind::none;
  int k = 10;         // for knn
  double eps = 0.0;   // for epsilon
};

Eigen::MatrixXd apply_prune(const Eigen::MatrixXd& w, const PrunePolicy& policy);

/// Hyperparameters of the alternating optimization. Defaults are tuned for
/// the poisoned-structure regime: heavy reliance on the learned similarity
/// with light smoothness, alignment, and sparsity pressure.
struct TrainConfig {
  double gamma1 = 0.05;   // smoothness weight
  double gamma2 = 0.01;   // alignment weight
  double lambda1 = 0.01;  // l1 weight on the selector
  double alpha = 0.9;     // blend weight
  double tau = 2.0;       // kernel width
  double eta = 0.2;             // GCN step size
  double eta_structure = 0.02;  // structure step size
  int outer_steps = 30;         // T
  int structure_inner = 1;      // I
  int gcn_inner = 5;            // J
  int hidden = 16;              // k
  int projection_dim = 0;       // p; 0 means full feature dimension
  PrunePolicy prune;
  bool include_gnn_in_structure_step = true;
  std::uint64_t seed = 0;
  double power_tol = 1e-8;
  int power_max_iter = 1000;

  /// theta1 = gamma1, theta2 = gamma1 * lambda1, theta3 = gamma2.
  void set_theta(double theta1, double theta2, double theta3);
  void validate() const;
};

struct IterationLog {
  double l_gnn = 0.0;
  double l_ss = 0.0;     // smoothness + lambda1 * ||a||_1
  double l_align = 0.0;  // 0 when gamma2 == 0 (term disabled)
  double total = 0.0;    // l_gnn + gamma1*l_ss + gamma2*l_align
};

struct TrainReport {
  std::vector<IterationLog> iterations;  // entry 0 is the initial state
  double test_accuracy = 0.0;
  Eigen::MatrixXd learned_adjacency;  // final blended matrix, post-pruning
  GcnParams gcn;
  StructureParams structure;
  double wall_ms = 0.0;
  bool alignment_converged = true;
};

/// Chain rule through N = D^{-1/2} (W + I) D^{-1/2}: maps dL/dN to dL/dW.
Eigen::MatrixXd normalization_backward(const Eigen::MatrixXd& w,
                                       const Eigen::MatrixXd& upstream);

struct StructureStepGradients {
  Eigen::MatrixXd projection_grad;
  Eigen::VectorXd selector_grad;
  bool alignment_converged = true;
};

/// The structure-step gradient at the current parameters: the GNN chain
/// through blending and normalization (optional), the smoothness chain, and
/// the alignment chain, all routed through the kernel.
StructureStepGradients structure_gradients(const Graph& g, const GcnParams& gcn,
                                           const StructureParams& sp,
                                           const TrainConfig& cfg);

/// The smooth part of the combined objective at (gcn, sp), plus the l1 term:
/// L_gnn + gamma1*(smoothness + lambda1*||a||_1) + gamma2*sigma_max(X^T A_hat).
double total_objective(const Graph& g, const GcnParams& gcn,
                       const StructureParams& sp, const TrainConfig& cfg);

/// Alternating optimization of GCN weights and structure parameters.
TrainReport run_rgsla(const Graph& g, const TrainConfig& cfg);

/// Baseline: the same GCN trained on the normalized raw adjacency.
TrainReport train_plain_gcn(const Graph& g, double eta, int epochs, int hidden,
                            std::uint64_t seed);

/// Fraction of masked nodes whose argmax row of P matches the label;
/// argmax ties go to the lowest class index.
double evaluate_accuracy(const ForwardCache& cache, const Eigen::VectorXi& labels,
                         const BoolVec& mask);

}  // namespace rgsl
