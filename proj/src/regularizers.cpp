#include "rgsl/regularizers.hpp"

#include <cmath>

#include "rgsl/errors.hpp"
#include "rgsl/rng.hpp"
#include "rgsl/structure.hpp"

namespace rgsl {

double smoothness_loss(const Eigen::MatrixXd& x, const Eigen::MatrixXd& similarity,
                       const Eigen::VectorXd& degree) {
  const Eigen::Index n = x.rows();
  if (similarity.rows() != n || similarity.cols() != n || degree.size() != n)
    throw ValidationError("smoothness_loss: shape mismatch");
  const Eigen::MatrixXd lap_x = degree.asDiagonal() * x - similarity * x;
  return (x.transpose() * lap_x).trace();
}

Eigen::MatrixXd smoothness_grad_wrt_similarity(const Eigen::MatrixXd& x) {
  return 0.5 * pairwise_sq_distances(x);
}

namespace {

Eigen::VectorXd random_unit_vector(Eigen::Index size, Rng& rng) {
  Eigen::VectorXd v(size);
  do {
    for (Eigen::Index i = 0; i < size; ++i) v[i] = rng.normal();
  } while (v.norm() == 0.0);
  return v / v.norm();
}

}  // namespace

SpectralPair spectral_norm(const Eigen::MatrixXd& y, double tol, int max_iter,
                           std::uint64_t seed) {
  if (y.size() == 0) throw ValidationError("spectral_norm: empty matrix");
  if (!(tol > 0.0)) throw ValidationError("spectral_norm: tol must be positive");

  SpectralPair pair;
  pair.u = Eigen::VectorXd::Unit(y.rows(), 0);
  pair.v = Eigen::VectorXd::Unit(y.cols(), 0);
  if (y.isZero(0.0)) {
    pair.converged = true;
    return pair;
  }

  Rng rng(seed);
  Eigen::VectorXd v = random_unit_vector(y.cols(), rng);
  double sigma_prev = (y * v).norm();
  pair.sigma_history.push_back(sigma_prev);

  for (int it = 1; it <= max_iter; ++it) {
    Eigen::VectorXd w = y.transpose() * (y * v);
    const double w_norm = w.norm();
    if (w_norm == 0.0) {
      // Start vector fell in the null space; re-draw.
      v = random_unit_vector(y.cols(), rng);
      sigma_prev = (y * v).norm();
      continue;
    }
    v = w / w_norm;
    const double sigma = (y * v).norm();
    pair.sigma_history.push_back(sigma);
    pair.iterations_used = it;
    if (std::abs(sigma - sigma_prev) < tol) {
      pair.converged = true;
      sigma_prev = sigma;
      break;
    }
    sigma_prev = sigma;
  }

  pair.sigma = sigma_prev;
  pair.v = v;
  const Eigen::VectorXd yv = y * v;
  pair.u = yv.norm() > 0.0 ? Eigen::VectorXd(yv / yv.norm())
                           : Eigen::VectorXd(Eigen::VectorXd::Unit(y.rows(), 0));
  return pair;
}

double second_singular_value(const Eigen::MatrixXd& y, const SpectralPair& top,
                             double tol, int max_iter, std::uint64_t seed) {
  if (y.cols() < 2) return 0.0;
  Rng rng(seed);
  Eigen::VectorXd v = random_unit_vector(y.cols(), rng);
  v -= top.v * top.v.dot(v);
  if (v.norm() == 0.0) return 0.0;
  v.normalize();

  const double top_sq = top.sigma * top.sigma;
  double sigma = (y * v).norm();
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd w = y.transpose() * (y * v) - top_sq * (top.v.dot(v)) * top.v;
    w -= top.v * top.v.dot(w);  // keep the iterate deflated
    const double w_norm = w.norm();
    if (w_norm == 0.0) return 0.0;
    v = w / w_norm;
    const double next = (y * v).norm();
    const bool done = std::abs(next - sigma) < tol;
    sigma = next;
    if (done) break;
  }
  return sigma;
}

AlignmentResult alignment_loss_and_grad(const Eigen::MatrixXd& x,
                                        const Eigen::MatrixXd& a_hat,
                                        double tol, int max_iter,
                                        std::uint64_t seed) {
  const Eigen::Index n = a_hat.rows();
  if (a_hat.cols() != n) throw ValidationError("alignment: matrix must be square");
  if (x.rows() != n) throw ValidationError("alignment: feature rows must match");

  AlignmentResult result;
  if (a_hat.isZero(0.0) || x.isZero(0.0)) {
    result.grad = Eigen::MatrixXd::Zero(n, n);
    return result;
  }

  const Eigen::MatrixXd y = x.transpose() * a_hat;  // d x n
  const SpectralPair pair = spectral_norm(y, tol, max_iter, seed);
  result.loss = pair.sigma;
  result.converged = pair.converged;
  const Eigen::MatrixXd raw = (x * pair.u) * pair.v.transpose();
  result.grad = 0.5 * (raw + raw.transpose());
  return result;
}

}  // namespace rgsl
