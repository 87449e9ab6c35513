#include "rgsl/structure.hpp"

#include <cmath>

#include "rgsl/errors.hpp"

namespace rgsl {

StructureParams StructureParams::identity_init(int d, int p, double tau,
                                               double alpha) {
  StructureParams params;
  params.projection = Eigen::MatrixXd::Zero(p, d);
  for (int i = 0; i < std::min(p, d); ++i) params.projection(i, i) = 1.0;
  params.selector = Eigen::VectorXd::Ones(d);
  params.tau = tau;
  params.alpha = alpha;
  validate_structure_params(params, d);
  return params;
}

void validate_structure_params(const StructureParams& params, int d) {
  if (params.projection.cols() != d)
    throw ValidationError("structure: projection column count must equal feature dim");
  if (params.projection.rows() > d)
    throw ValidationError("structure: projection rows must not exceed feature dim");
  if (params.selector.size() != d)
    throw ValidationError("structure: selector length must equal feature dim");
  if (!(params.tau > 0.0)) throw ValidationError("structure: tau must be positive");
  if (!(params.alpha >= 0.0 && params.alpha <= 1.0))
    throw ValidationError("structure: alpha must lie in [0, 1]");
}

Eigen::MatrixXd transform_features(const StructureParams& params,
                                   const Eigen::MatrixXd& x) {
  if (x.cols() != params.projection.cols() || x.cols() != params.selector.size())
    throw ValidationError("transform_features: shape mismatch");
  const Eigen::MatrixXd selected =
      x.array().rowwise() * params.selector.transpose().array();
  return selected * params.projection.transpose();
}

Eigen::MatrixXd pairwise_sq_distances(const Eigen::MatrixXd& xt) {
  const Eigen::Index n = xt.rows();
  const Eigen::VectorXd sq_norms = xt.rowwise().squaredNorm();
  const Eigen::MatrixXd gram = xt * xt.transpose();
  Eigen::MatrixXd dist(n, n);
  // Fill the upper triangle and mirror so the result is bitwise symmetric.
  for (Eigen::Index i = 0; i < n; ++i) {
    dist(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = std::max(0.0, sq_norms[i] + sq_norms[j] - 2.0 * gram(i, j));
      dist(i, j) = v;
      dist(j, i) = v;
    }
  }
  return dist;
}

LearnedGraph similarity_matrix(const StructureParams& params,
                               const Eigen::MatrixXd& x) {
  validate_structure_params(params, static_cast<int>(x.cols()));
  const Eigen::MatrixXd xt = transform_features(params, x);
  const Eigen::MatrixXd dist = pairwise_sq_distances(xt);
  const double inv_two_tau_sq = 1.0 / (2.0 * params.tau * params.tau);

  LearnedGraph out;
  const Eigen::Index n = x.rows();
  out.similarity.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.similarity(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = std::exp(-dist(i, j) * inv_two_tau_sq);
      out.similarity(i, j) = v;
      out.similarity(j, i) = v;
    }
  }
  out.degree = out.similarity.rowwise().sum();
  return out;
}

Eigen::MatrixXd blend_adjacency(const Eigen::MatrixXd& a,
                                const Eigen::MatrixXd& a_tilde, double alpha) {
  if (a.rows() != a_tilde.rows() || a.cols() != a_tilde.cols())
    throw ValidationError("blend_adjacency: shape mismatch");
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw ValidationError("blend_adjacency: alpha must lie in [0, 1]");
  return (1.0 - alpha) * a + alpha * a_tilde;
}

Eigen::VectorXd prox_l1(const Eigen::VectorXd& v, double threshold) {
  if (threshold < 0.0) throw ValidationError("prox_l1: negative threshold");
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double shrunk = std::abs(v[i]) - threshold;
    out[i] = shrunk > 0.0 ? (v[i] > 0.0 ? shrunk : -shrunk) : 0.0;
  }
  return out;
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> kernel_gradients(
    const StructureParams& params, const Eigen::MatrixXd& x,
    const Eigen::MatrixXd& upstream) {
  const Eigen::Index n = x.rows();
  validate_structure_params(params, static_cast<int>(x.cols()));
  if (upstream.rows() != n || upstream.cols() != n)
    throw ValidationError("kernel_gradients: upstream shape mismatch");

  // Coefficients c_ij = upstream_ij * d(similarity_ij)/d(phi^2_ij)
  //                   = -upstream_ij * similarity_ij / (2 tau^2).
  const LearnedGraph learned = similarity_matrix(params, x);
  const double inv_two_tau_sq = 1.0 / (2.0 * params.tau * params.tau);
  Eigen::MatrixXd coeff =
      (-inv_two_tau_sq) * upstream.cwiseProduct(learned.similarity);
  coeff.diagonal().setZero();

  // With z_i = selector ∘ x_i and the graph Laplacian L_c of coeff:
  //   sum_ij c_ij (z_i - z_j)(z_i - z_j)^T = 2 Z^T L_c Z,
  // giving dL/dM = 4 M Z^T L_c Z and dL/da = 4 (M^T M ∘ X^T L_c X) a.
  const Eigen::VectorXd row_sums = coeff.rowwise().sum();
  const Eigen::MatrixXd z =
      x.array().rowwise() * params.selector.transpose().array();
  const Eigen::MatrixXd lap_z = row_sums.asDiagonal() * z - coeff * z;
  const Eigen::MatrixXd lap_x = row_sums.asDiagonal() * x - coeff * x;

  Eigen::MatrixXd grad_projection = 4.0 * params.projection * (z.transpose() * lap_z);
  const Eigen::MatrixXd gram_projection =
      params.projection.transpose() * params.projection;
  Eigen::VectorXd grad_selector =
      4.0 * (gram_projection.cwiseProduct(x.transpose() * lap_x)) * params.selector;
  return {std::move(grad_projection), std::move(grad_selector)};
}

}  // namespace rgsl
