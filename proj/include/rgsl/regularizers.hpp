#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace rgsl {

/// Top singular value and unit singular pair from power iteration.
struct SpectralPair {
  double sigma = 0.0;
  Eigen::VectorXd u;  // left singular vector, length rows(Y)
  Eigen::VectorXd v;  // right singular vector, length cols(Y)
  int iterations_used = 0;
  bool converged = false;
  std::vector<double> sigma_history;  // per-iteration estimates
};

/// tr(X^T (D - A) X) for a similarity matrix A with degree vector D;
/// equals half the similarity-weighted sum of squared row distances.
double smoothness_loss(const Eigen::MatrixXd& x, const Eigen::MatrixXd& similarity,
                       const Eigen::VectorXd& degree);

/// Gradient of the smoothness loss with respect to each similarity entry:
/// half the squared distance between feature rows, zero diagonal.
Eigen::MatrixXd smoothness_grad_wrt_similarity(const Eigen::MatrixXd& x);

/// Power iteration on Y^T Y from a seeded random start. Estimates are
/// Rayleigh quotients, so sigma_history is non-decreasing.
SpectralPair spectral_norm(const Eigen::MatrixXd& y, double tol = 1e-8,
                           int max_iter = 1000, std::uint64_t seed = 0);

/// Second singular value by power iteration deflated against the top pair.
double second_singular_value(const Eigen::MatrixXd& y, const SpectralPair& top,
                             double tol = 1e-8, int max_iter = 1000,
                             std::uint64_t seed = 1);

struct AlignmentResult {
  double loss = 0.0;
  Eigen::MatrixXd grad;  // symmetrized subgradient w.r.t. the blended matrix
  bool converged = true;
};

/// Spectral-norm coupling of features and structure: loss = sigma_max(X^T A_hat)
/// with subgradient X u v^T, symmetrized because A_hat is constrained symmetric.
AlignmentResult alignment_loss_and_grad(const Eigen::MatrixXd& x,
                                        const Eigen::MatrixXd& a_hat,
                                        double tol = 1e-8, int max_iter = 1000,
                                        std::uint64_t seed = 0);

}  // namespace rgsl
