#include "rgsl/trainer.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "rgsl/errors.hpp"
#include "rgsl/regularizers.hpp"

namespace rgsl {

Eigen::MatrixXd apply_prune(const Eigen::MatrixXd& w, const PrunePolicy& policy) {
  switch (policy.kind) {
    case PruneKind::none:
      return w;
    case PruneKind::knn:
      return prune_knn(w, policy.k);
    case PruneKind::epsilon:
      return prune_epsilon(w, policy.eps);
  }
  throw ValidationError("apply_prune: unknown policy");
}

void TrainConfig::set_theta(double theta1, double theta2, double theta3) {
  if (theta1 < 0.0 || theta2 < 0.0 || theta3 < 0.0)
    throw ValidationError("theta parameters must be nonnegative");
  if (theta1 == 0.0 && theta2 != 0.0)
    throw ValidationError("theta2 > 0 requires theta1 > 0");
  gamma1 = theta1;
  lambda1 = theta1 > 0.0 ? theta2 / theta1 : 0.0;
  gamma2 = theta3;
}

void TrainConfig::validate() const {
  if (gamma1 < 0.0 || gamma2 < 0.0 || lambda1 < 0.0)
    throw ValidationError("config: gamma1, gamma2, lambda1 must be nonnegative");
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw ValidationError("config: alpha must lie in [0, 1]");
  if (!(tau > 0.0)) throw ValidationError("config: tau must be positive");
  if (!(eta > 0.0) || !(eta_structure > 0.0))
    throw ValidationError("config: step sizes must be positive");
  if (outer_steps < 0) throw ValidationError("config: outer_steps must be >= 0");
  if (structure_inner < 1 || gcn_inner < 1)
    throw ValidationError("config: inner loop counts must be >= 1");
  if (hidden < 1) throw ValidationError("config: hidden width must be >= 1");
  if (projection_dim < 0) throw ValidationError("config: projection_dim must be >= 0");
  if (prune.kind == PruneKind::knn && prune.k < 1)
    throw ValidationError("config: knn prune needs k >= 1");
  if (prune.kind == PruneKind::epsilon && prune.eps < 0.0)
    throw ValidationError("config: epsilon prune needs eps >= 0");
}

Eigen::MatrixXd normalization_backward(const Eigen::MatrixXd& w,
                                       const Eigen::MatrixXd& upstream) {
  const Eigen::Index n = w.rows();
  if (w.cols() != n || upstream.rows() != n || upstream.cols() != n)
    throw ValidationError("normalization_backward: shape mismatch");

  // S = W + I, deg_p = row sum of S. With G = dL/dN:
  //   dL/dS_pq = G_pq / sqrt(deg_p deg_q)
  //            - (1/2) deg_p^{-3/2} sum_j (G_pj + G_jp) S_pj deg_j^{-1/2}.
  Eigen::MatrixXd s = w;
  s.diagonal().array() += 1.0;
  const Eigen::VectorXd deg = s.rowwise().sum();
  const Eigen::VectorXd inv_sqrt = deg.array().rsqrt();
  const Eigen::VectorXd inv_32 = inv_sqrt.array() / deg.array();

  Eigen::MatrixXd grad =
      inv_sqrt.asDiagonal() * upstream * inv_sqrt.asDiagonal();
  const Eigen::VectorXd row_mix =
      ((upstream + upstream.transpose()).cwiseProduct(s)) * inv_sqrt;
  grad.noalias() -= 0.5 * (inv_32.cwiseProduct(row_mix)) *
                    Eigen::RowVectorXd::Ones(n);
  return grad;
}

namespace {

int resolved_projection_dim(const Graph& g, const TrainConfig& cfg) {
  const int p = cfg.projection_dim > 0 ? cfg.projection_dim : g.d;
  if (p > g.d)
    throw ValidationError("config: projection_dim exceeds feature dimension");
  return p;
}

Eigen::MatrixXd symmetrized_zero_diag(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd out = 0.5 * (m + m.transpose());
  out.diagonal().setZero();
  return out;
}

struct ObjectiveTerms {
  double l_gnn = 0.0;
  double l_ss = 0.0;
  double l_align = 0.0;
  bool alignment_converged = true;

  double total(const TrainConfig& cfg) const {
    return l_gnn + cfg.gamma1 * l_ss + cfg.gamma2 * l_align;
  }
};

// Objective pieces at a given state. The alignment term is evaluated only
// when gamma2 > 0; its logged value is 0 otherwise.
ObjectiveTerms objective_terms(const Graph& g, const GcnParams& gcn_params,
                               const StructureParams& sp,
                               const Eigen::MatrixXd& similarity,
                               const Eigen::VectorXd& degree,
                               const Eigen::MatrixXd& blended,
                               const TrainConfig& cfg) {
  ObjectiveTerms terms;
  const NormalizedAdjacency n_adj = normalize_adjacency(blended);
  const ForwardCache cache = forward(gcn_params, n_adj, g.features);
  terms.l_gnn = masked_cross_entropy(cache, g.labels, g.train_mask);
  terms.l_ss = smoothness_loss(g.features, similarity, degree) +
               cfg.lambda1 * sp.selector.lpNorm<1>();
  if (cfg.gamma2 > 0.0) {
    const AlignmentResult align = alignment_loss_and_grad(
        g.features, blended, cfg.power_tol, cfg.power_max_iter, cfg.seed);
    terms.l_align = align.loss;
    terms.alignment_converged = align.converged;
  }
  return terms;
}

void check_finite(const ObjectiveTerms& terms, int outer_step) {
  const auto fail = [outer_step](const char* name) {
    throw NumericError(std::string(name) + " diverged (non-finite) at outer step " +
                       std::to_string(outer_step));
  };
  if (!std::isfinite(terms.l_gnn)) fail("l_gnn");
  if (!std::isfinite(terms.l_ss)) fail("l_ss");
  if (!std::isfinite(terms.l_align)) fail("l_align");
}

// Forward passes raise layer-level numeric errors; tag them with the
// objective term so divergence reports name what blew up.
template <typename Fn>
auto with_gnn_context(int step, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const NumericError& e) {
    throw NumericError("l_gnn diverged at step " + std::to_string(step) + " (" +
                       e.what() + ")");
  }
}

}  // namespace

StructureStepGradients structure_gradients(const Graph& g, const GcnParams& gcn_params,
                                           const StructureParams& sp,
                                           const TrainConfig& cfg) {
  const LearnedGraph learned = similarity_matrix(sp, g.features);
  const Eigen::MatrixXd blended =
      blend_adjacency(g.adjacency, learned.similarity, sp.alpha);

  Eigen::MatrixXd upstream = Eigen::MatrixXd::Zero(g.n, g.n);
  StructureStepGradients out;

  if (cfg.include_gnn_in_structure_step && sp.alpha > 0.0) {
    const NormalizedAdjacency n_adj = normalize_adjacency(blended);
    const ForwardCache cache = forward(gcn_params, n_adj, g.features);
    const GcnGradients grads = backward(gcn_params, cache, g.labels, g.train_mask);
    const Eigen::MatrixXd d_blended =
        normalization_backward(blended, grads.normalized_adj);
    upstream += sp.alpha * symmetrized_zero_diag(d_blended);
  }
  if (cfg.gamma1 > 0.0)
    upstream += cfg.gamma1 * smoothness_grad_wrt_similarity(g.features);
  if (cfg.gamma2 > 0.0 && sp.alpha > 0.0) {
    const AlignmentResult align = alignment_loss_and_grad(
        g.features, blended, cfg.power_tol, cfg.power_max_iter, cfg.seed);
    out.alignment_converged = align.converged;
    Eigen::MatrixXd align_grad = align.grad;
    align_grad.diagonal().setZero();
    upstream += cfg.gamma2 * sp.alpha * align_grad;
  }

  auto [proj_grad, sel_grad] = kernel_gradients(sp, g.features, upstream);
  out.projection_grad = std::move(proj_grad);
  out.selector_grad = std::move(sel_grad);
  return out;
}

double total_objective(const Graph& g, const GcnParams& gcn_params,
                       const StructureParams& sp, const TrainConfig& cfg) {
  const LearnedGraph learned = similarity_matrix(sp, g.features);
  const Eigen::MatrixXd blended =
      blend_adjacency(g.adjacency, learned.similarity, sp.alpha);
  return objective_terms(g, gcn_params, sp, learned.similarity, learned.degree,
                         blended, cfg)
      .total(cfg);
}

TrainReport run_rgsla(const Graph& g, const TrainConfig& cfg) {
  validate_graph(g);
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();

  const int p = resolved_projection_dim(g, cfg);
  GcnParams gcn_params = glorot_init(g.d, cfg.hidden, g.num_classes, cfg.seed);
  StructureParams sp =
      StructureParams::identity_init(g.d, p, cfg.tau, cfg.alpha);

  TrainReport report;

  // Initial state per the algorithm: the learned similarity starts at A.
  {
    const Eigen::VectorXd degree = g.adjacency.rowwise().sum();
    const Eigen::MatrixXd blended =
        blend_adjacency(g.adjacency, g.adjacency, sp.alpha);
    ObjectiveTerms terms = objective_terms(g, gcn_params, sp, g.adjacency,
                                           degree, blended, cfg);
    check_finite(terms, 0);
    report.alignment_converged =
        report.alignment_converged && terms.alignment_converged;
    report.iterations.push_back(
        {terms.l_gnn, terms.l_ss, terms.l_align, terms.total(cfg)});
    if (cfg.outer_steps == 0) {
      const NormalizedAdjacency n_adj = normalize_adjacency(blended);
      const ForwardCache cache = forward(gcn_params, n_adj, g.features);
      report.test_accuracy = evaluate_accuracy(cache, g.labels, g.test_mask);
      report.learned_adjacency = apply_prune(blended, cfg.prune);
      report.gcn = gcn_params;
      report.structure = sp;
      report.wall_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - start)
                           .count();
      return report;
    }
  }

  for (int t = 0; t < cfg.outer_steps; ++t) {
    for (int i = 0; i < cfg.structure_inner; ++i) {
      const LearnedGraph learned = similarity_matrix(sp, g.features);
      const Eigen::MatrixXd blended =
          blend_adjacency(g.adjacency, learned.similarity, sp.alpha);
      const NormalizedAdjacency n_adj = normalize_adjacency(blended);

      for (int j = 0; j < cfg.gcn_inner; ++j) {
        gcn_params = with_gnn_context(t + 1, [&] {
          const ForwardCache cache = forward(gcn_params, n_adj, g.features);
          const GcnGradients grads =
              backward(gcn_params, cache, g.labels, g.train_mask);
          return sgd_step(gcn_params, grads, cfg.eta);
        });
      }

      const StructureStepGradients sg = with_gnn_context(
          t + 1, [&] { return structure_gradients(g, gcn_params, sp, cfg); });
      report.alignment_converged =
          report.alignment_converged && sg.alignment_converged;
      sp.projection -= cfg.eta_structure * sg.projection_grad;
      sp.selector = prox_l1(sp.selector - cfg.eta_structure * sg.selector_grad,
                            cfg.eta_structure * cfg.lambda1);
    }

    const LearnedGraph learned = similarity_matrix(sp, g.features);
    const Eigen::MatrixXd blended =
        blend_adjacency(g.adjacency, learned.similarity, sp.alpha);
    ObjectiveTerms terms = with_gnn_context(t + 1, [&] {
      return objective_terms(g, gcn_params, sp, learned.similarity,
                             learned.degree, blended, cfg);
    });
    check_finite(terms, t + 1);
    report.alignment_converged =
        report.alignment_converged && terms.alignment_converged;
    report.iterations.push_back(
        {terms.l_gnn, terms.l_ss, terms.l_align, terms.total(cfg)});
  }

  const LearnedGraph learned = similarity_matrix(sp, g.features);
  const Eigen::MatrixXd blended =
      blend_adjacency(g.adjacency, learned.similarity, sp.alpha);
  const NormalizedAdjacency n_adj = normalize_adjacency(blended);
  const ForwardCache cache = forward(gcn_params, n_adj, g.features);
  report.test_accuracy = evaluate_accuracy(cache, g.labels, g.test_mask);
  report.learned_adjacency = apply_prune(blended, cfg.prune);
  report.gcn = gcn_params;
  report.structure = sp;
  report.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return report;
}

TrainReport train_plain_gcn(const Graph& g, double eta, int epochs, int hidden,
                            std::uint64_t seed) {
  validate_graph(g);
  if (!(eta > 0.0)) throw ValidationError("train_plain_gcn: eta must be positive");
  if (epochs < 0) throw ValidationError("train_plain_gcn: negative epoch count");
  if (hidden < 1) throw ValidationError("train_plain_gcn: hidden width must be >= 1");
  const auto start = std::chrono::steady_clock::now();

  GcnParams params = glorot_init(g.d, hidden, g.num_classes, seed);
  const NormalizedAdjacency n_adj = normalize_adjacency(g.adjacency);

  TrainReport report;
  {
    const ForwardCache cache = forward(params, n_adj, g.features);
    const double loss = masked_cross_entropy(cache, g.labels, g.train_mask);
    if (!std::isfinite(loss))
      throw NumericError("l_gnn diverged (non-finite) at epoch 0");
    report.iterations.push_back({loss, 0.0, 0.0, loss});
  }
  for (int e = 0; e < epochs; ++e) {
    const double loss = with_gnn_context(e + 1, [&] {
      const ForwardCache cache = forward(params, n_adj, g.features);
      const GcnGradients grads = backward(params, cache, g.labels, g.train_mask);
      params = sgd_step(params, grads, eta);
      return masked_cross_entropy(forward(params, n_adj, g.features), g.labels,
                                  g.train_mask);
    });
    if (!std::isfinite(loss))
      throw NumericError("l_gnn diverged (non-finite) at epoch " + std::to_string(e + 1));
    report.iterations.push_back({loss, 0.0, 0.0, loss});
  }

  const ForwardCache cache = forward(params, n_adj, g.features);
  report.test_accuracy = evaluate_accuracy(cache, g.labels, g.test_mask);
  report.learned_adjacency = g.adjacency;
  report.gcn = params;
  report.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return report;
}

double evaluate_accuracy(const ForwardCache& cache, const Eigen::VectorXi& labels,
                         const BoolVec& mask) {
  const Eigen::Index n = cache.probs.rows();
  if (labels.size() != n || mask.size() != n)
    throw ValidationError("evaluate_accuracy: length mismatch");
  const Eigen::Index count = mask.count();
  if (count == 0) throw ValidationError("evaluate_accuracy: empty mask");

  Eigen::Index correct = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!mask[i]) continue;
    int arg = 0;
    for (int c = 1; c < cache.probs.cols(); ++c)
      if (cache.probs(i, c) > cache.probs(i, arg)) arg = c;
    if (arg == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(count);
}

}  // namespace rgsl
