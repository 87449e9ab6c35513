#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rgsl/attack.hpp"
#include "rgsl/bounds.hpp"
#include "rgsl/errors.hpp"
#include "rgsl/graph.hpp"
#include "rgsl/graph_io.hpp"
#include "rgsl/plan.hpp"
#include "rgsl/regularizers.hpp"
#include "rgsl/structure.hpp"
#include "rgsl/trainer.hpp"

namespace py = pybind11;
using namespace rgsl;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Robust graph structure learning: denoised adjacency + GCN training";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<IoError>(m, "IoError", PyExc_IOError);

  py::class_<Graph>(m, "Graph")
      .def(py::init<>())
      .def_readwrite("n", &Graph::n)
      .def_readwrite("d", &Graph::d)
      .def_readwrite("num_classes", &Graph::num_classes)
      .def_readwrite("features", &Graph::features)
      .def_readwrite("adjacency", &Graph::adjacency)
      .def_readwrite("labels", &Graph::labels)
      .def_readwrite("train_mask", &Graph::train_mask)
      .def_readwrite("test_mask", &Graph::test_mask)
      .def("edge_count", &Graph::edge_count)
      .def("validate", [](const Graph& g) { validate_graph(g); });

  m.def("sbm_generate", &sbm_generate, py::arg("sizes"), py::arg("p_in"),
        py::arg("p_out"), py::arg("feature_means"), py::arg("noise_sd"),
        py::arg("seed"), py::arg("train_fraction") = 0.1);
  m.def("load_graph_dir", &load_graph_dir, py::arg("dir"));
  m.def("save_graph_dir", &save_graph_dir, py::arg("graph"), py::arg("dir"));

  m.def(
      "normalize_adjacency",
      [](const Eigen::MatrixXd& a) { return normalize_adjacency(a).matrix; },
      py::arg("a"), "D^{-1/2} (A + I) D^{-1/2}");
  m.def("prune_knn", &prune_knn, py::arg("w"), py::arg("k"));
  m.def("prune_epsilon", &prune_epsilon, py::arg("w"), py::arg("eps"));
  m.def("homophily_ratios", &homophily_ratios, py::arg("graph"), py::arg("w"));

  py::class_<StructureParams>(m, "StructureParams")
      .def(py::init<>())
      .def_static("identity_init", &StructureParams::identity_init, py::arg("d"),
                  py::arg("p"), py::arg("tau"), py::arg("alpha"))
      .def_readwrite("projection", &StructureParams::projection)
      .def_readwrite("selector", &StructureParams::selector)
      .def_readwrite("tau", &StructureParams::tau)
      .def_readwrite("alpha", &StructureParams::alpha);

  py::class_<LearnedGraph>(m, "LearnedGraph")
      .def_readonly("similarity", &LearnedGraph::similarity)
      .def_readonly("blended", &LearnedGraph::blended)
      .def_readonly("degree", &LearnedGraph::degree);

  m.def("transform_features", &transform_features, py::arg("params"), py::arg("x"));
  m.def("pairwise_sq_distances", &pairwise_sq_distances, py::arg("xt"));
  m.def("similarity_matrix", &similarity_matrix, py::arg("params"), py::arg("x"));
  m.def("blend_adjacency", &blend_adjacency, py::arg("a"), py::arg("a_tilde"),
        py::arg("alpha"));
  m.def("prox_l1", &prox_l1, py::arg("v"), py::arg("threshold"));
  m.def("kernel_gradients", &kernel_gradients, py::arg("params"), py::arg("x"),
        py::arg("upstream"));

  m.def("smoothness_loss", &smoothness_loss, py::arg("x"), py::arg("similarity"),
        py::arg("degree"));
  m.def("smoothness_grad_wrt_similarity", &smoothness_grad_wrt_similarity,
        py::arg("x"));

  py::class_<SpectralPair>(m, "SpectralPair")
      .def_readonly("sigma", &SpectralPair::sigma)
      .def_readonly("u", &SpectralPair::u)
      .def_readonly("v", &SpectralPair::v)
      .def_readonly("iterations_used", &SpectralPair::iterations_used)
      .def_readonly("converged", &SpectralPair::converged)
      .def_readonly("sigma_history", &SpectralPair::sigma_history);
  m.def("spectral_norm", &spectral_norm, py::arg("y"), py::arg("tol") = 1e-8,
        py::arg("max_iter") = 1000, py::arg("seed") = 0);

  py::class_<AlignmentResult>(m, "AlignmentResult")
      .def_readonly("loss", &AlignmentResult::loss)
      .def_readonly("grad", &AlignmentResult::grad)
      .def_readonly("converged", &AlignmentResult::converged);
  m.def("alignment_loss_and_grad", &alignment_loss_and_grad, py::arg("x"),
        py::arg("a_hat"), py::arg("tol") = 1e-8, py::arg("max_iter") = 1000,
        py::arg("seed") = 0);

  py::enum_<PruneKind>(m, "PruneKind")
      .value("none", PruneKind::none)
      .value("knn", PruneKind::knn)
      .value("epsilon", PruneKind::epsilon);
  py::class_<PrunePolicy>(m, "PrunePolicy")
      .def(py::init<>())
      .def_readwrite("kind", &PrunePolicy::kind)
      .def_readwrite("k", &PrunePolicy::k)
      .def_readwrite("eps", &PrunePolicy::eps);

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("gamma1", &TrainConfig::gamma1)
      .def_readwrite("gamma2", &TrainConfig::gamma2)
      .def_readwrite("lambda1", &TrainConfig::lambda1)
      .def_readwrite("alpha", &TrainConfig::alpha)
      .def_readwrite("tau", &TrainConfig::tau)
      .def_readwrite("eta", &TrainConfig::eta)
      .def_readwrite("eta_structure", &TrainConfig::eta_structure)
      .def_readwrite("outer_steps", &TrainConfig::outer_steps)
      .def_readwrite("structure_inner", &TrainConfig::structure_inner)
      .def_readwrite("gcn_inner", &TrainConfig::gcn_inner)
      .def_readwrite("hidden", &TrainConfig::hidden)
      .def_readwrite("projection_dim", &TrainConfig::projection_dim)
      .def_readwrite("prune", &TrainConfig::prune)
      .def_readwrite("include_gnn_in_structure_step",
                     &TrainConfig::include_gnn_in_structure_step)
      .def_readwrite("seed", &TrainConfig::seed)
      .def("set_theta", &TrainConfig::set_theta, py::arg("theta1"),
           py::arg("theta2"), py::arg("theta3"))
      .def("validate", &TrainConfig::validate);

  py::class_<IterationLog>(m, "IterationLog")
      .def_readonly("l_gnn", &IterationLog::l_gnn)
      .def_readonly("l_ss", &IterationLog::l_ss)
      .def_readonly("l_align", &IterationLog::l_align)
      .def_readonly("total", &IterationLog::total);

  py::class_<TrainReport>(m, "TrainReport")
      .def_readonly("iterations", &TrainReport::iterations)
      .def_readonly("test_accuracy", &TrainReport::test_accuracy)
      .def_readonly("learned_adjacency", &TrainReport::learned_adjacency)
      .def_readonly("structure", &TrainReport::structure)
      .def_readonly("wall_ms", &TrainReport::wall_ms)
      .def_readonly("alignment_converged", &TrainReport::alignment_converged);

  m.def("run_rgsla", &run_rgsla, py::arg("graph"), py::arg("config"));
  m.def("train_plain_gcn", &train_plain_gcn, py::arg("graph"), py::arg("eta"),
        py::arg("epochs"), py::arg("hidden"), py::arg("seed"));

  m.def("random_flip_attack", &random_flip_attack, py::arg("a"), py::arg("rate"),
        py::arg("seed"));
  m.def("feature_difference_attack", &feature_difference_attack, py::arg("graph"),
        py::arg("rate"), py::arg("seed"));

  py::class_<BoundParams>(m, "BoundParams")
      .def(py::init<>())
      .def_readwrite("norm_w1", &BoundParams::norm_w1)
      .def_readwrite("norm_w2", &BoundParams::norm_w2)
      .def_readwrite("lipschitz", &BoundParams::lipschitz)
      .def_readwrite("max_feature_norm", &BoundParams::max_feature_norm)
      .def_readwrite("common_degree", &BoundParams::common_degree)
      .def_readwrite("labeled_count", &BoundParams::labeled_count)
      .def_readwrite("total_count", &BoundParams::total_count)
      .def_readwrite("bias_bound", &BoundParams::bias_bound)
      .def_readwrite("weight_inf_bound", &BoundParams::weight_inf_bound)
      .def_readwrite("layers", &BoundParams::layers);

  m.def("neighbor_lists", &neighbor_lists, py::arg("a"));
  m.def("modal_degree", &modal_degree, py::arg("a"));
  m.def(
      "rademacher_lower_bound",
      [](const Eigen::MatrixXd& n_adj, const Eigen::MatrixXd& x,
         const BoundParams& params, const std::vector<std::vector<int>>& neighbors) {
        return rademacher_lower_bound({n_adj}, x, params, neighbors);
      },
      py::arg("normalized_adjacency"), py::arg("x"), py::arg("params"),
      py::arg("neighbors"));
  m.def(
      "rademacher_lower_bound_modal",
      [](const Eigen::MatrixXd& adjacency, const Eigen::MatrixXd& n_adj,
         const Eigen::MatrixXd& x, const BoundParams& params) {
        return rademacher_lower_bound_modal(adjacency, {n_adj}, x, params);
      },
      py::arg("adjacency"), py::arg("normalized_adjacency"), py::arg("x"),
      py::arg("params"));
  m.def("trc_upper_bound", &trc_upper_bound, py::arg("s"), py::arg("x"),
        py::arg("params"));
  m.def("generalization_gap_bound", &generalization_gap_bound, py::arg("trc"),
        py::arg("params"), py::arg("delta"));
}
