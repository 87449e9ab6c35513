#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rgsl/attack.hpp"
#include "rgsl/bounds.hpp"
#include "rgsl/errors.hpp"
#include "rgsl/graph.hpp"
#include "rgsl/graph_io.hpp"
#include "rgsl/plan.hpp"
#include "rgsl/regularizers.hpp"
#include "rgsl/trainer.hpp"

namespace fs = std::filesystem;
using namespace rgsl;

namespace {

std::vector<double> parse_rate_list(const std::string& csv) {
  std::vector<double> rates;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    rates.push_back(std::stod(item));
  }
  return rates;
}

std::vector<int> parse_size_list(const std::string& csv) {
  std::vector<int> sizes;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    sizes.push_back(std::stoi(item));
  }
  return sizes;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir);
}

int run_gen(const SyntheticSpec& spec, const std::string& out_dir) {
  const Graph g = generate_synthetic(spec);
  save_graph_dir(g, out_dir);
  std::cout << "wrote graph: n=" << g.n << " d=" << g.d << " C=" << g.num_classes
            << " edges=" << g.edge_count() << " -> " << out_dir << "\n";
  return 0;
}

int run_attack(const std::string& dataset, const std::string& kind_name,
               double rate, std::uint64_t seed, const std::string& out_dir) {
  const Graph g = load_graph_dir(dataset);
  const AttackSpec spec{attack_kind_from_string(kind_name), rate, seed};
  Graph poisoned = g;
  poisoned.adjacency = apply_attack(g, spec);
  save_graph_dir(poisoned, out_dir);

  ensure_dir(out_dir);
  std::ofstream manifest(fs::path(out_dir) / "manifest.tsv", std::ios::binary);
  if (!manifest) throw IoError("cannot write attack manifest");
  manifest << "kind\t" << to_string(spec.kind) << '\n'
           << "rate\t" << format_double(rate) << '\n'
           << "seed\t" << seed << '\n'
           << "pairs_changed\t" << pair_difference_count(g.adjacency, poisoned.adjacency)
           << '\n';
  std::cout << "wrote poisoned graph -> " << out_dir << "\n";
  return 0;
}

int run_homophily(const std::string& dataset, const std::string& learned_path,
                  const std::string& out_dir) {
  const Graph g = load_graph_dir(dataset);
  const Eigen::VectorXd r_raw = homophily_ratios(g, g.adjacency);

  bool has_learned = !learned_path.empty();
  Eigen::VectorXd r_learned;
  if (has_learned) {
    const Eigen::MatrixXd learned = load_dense_tsv(learned_path);
    r_learned = homophily_ratios(g, learned);
  }

  ensure_dir(out_dir);
  std::vector<std::vector<std::string>> rows;
  for (int i = 0; i < g.n; ++i)
    rows.push_back({std::to_string(i), format_double(r_raw[i]),
                    has_learned ? format_double(r_learned[i]) : ""});
  write_csv((fs::path(out_dir) / "homophily.csv").string(),
            {"node", "r_raw", "r_learned"}, rows);

  // 10 equal bins over [0,1]; the last bin includes 1.0.
  const auto histogram = [&](const Eigen::VectorXd& r) {
    std::vector<int> bins(10, 0);
    for (Eigen::Index i = 0; i < r.size(); ++i)
      ++bins[std::min(9, static_cast<int>(r[i] * 10.0))];
    return bins;
  };
  const std::vector<int> raw_bins = histogram(r_raw);
  std::vector<int> learned_bins(10, 0);
  if (has_learned) learned_bins = histogram(r_learned);

  std::vector<std::vector<std::string>> hist_rows;
  for (int b = 0; b < 10; ++b)
    hist_rows.push_back({format_double(b / 10.0), format_double((b + 1) / 10.0),
                         std::to_string(raw_bins[b]),
                         has_learned ? std::to_string(learned_bins[b]) : ""});
  write_csv((fs::path(out_dir) / "homophily_hist.csv").string(),
            {"bin_lo", "bin_hi", "count_raw", "count_learned"}, hist_rows);
  std::cout << "wrote homophily.csv and homophily_hist.csv -> " << out_dir << "\n";
  return 0;
}

int run_bound(const std::string& dataset, BoundParams params, double delta,
              bool modal_only, const std::string& out_file) {
  const Graph g = load_graph_dir(dataset);
  params.labeled_count = g.train_count();
  const NormalizedAdjacency n_adj = normalize_adjacency(g.adjacency);

  std::vector<std::pair<std::string, double>> values;
  const double b_used = params.max_feature_norm > 0.0
                            ? params.max_feature_norm
                            : g.features.rowwise().norm().maxCoeff();
  values.emplace_back("n", g.n);
  values.emplace_back("m", params.labeled_count);
  values.emplace_back("B", b_used);

  double lower = 0.0;
  if (modal_only) {
    lower = rademacher_lower_bound_modal(g.adjacency, n_adj, g.features, params);
    values.emplace_back("q_modal", modal_degree(g.adjacency));
  } else {
    const auto neighbors = neighbor_lists(g.adjacency);
    if (params.common_degree <= 0) params.common_degree = modal_degree(g.adjacency);
    lower = rademacher_lower_bound(n_adj, g.features, params, neighbors);
    values.emplace_back("q", params.common_degree);
  }
  values.emplace_back("rademacher_lower_bound", lower);

  const double s_inf = n_adj.matrix.cwiseAbs().rowwise().sum().maxCoeff();
  const double sx_2inf = (n_adj.matrix * g.features).rowwise().norm().maxCoeff();
  values.emplace_back("S_inf_norm", s_inf);
  values.emplace_back("SX_2inf_norm", sx_2inf);
  values.emplace_back("c1", 2.0 * params.lipschitz * params.bias_bound);
  values.emplace_back("c2", 2.0 * params.lipschitz * params.weight_inf_bound);
  values.emplace_back("c3", params.lipschitz * params.weight_inf_bound *
                                std::sqrt(2.0 / g.d));
  params.total_count = g.n;
  const double trc = trc_upper_bound(n_adj.matrix, g.features, params);
  values.emplace_back("trc_upper_bound", trc);
  values.emplace_back("generalization_gap_bound",
                      generalization_gap_bound(trc, params, delta));

  for (const auto& [name, value] : values)
    std::cout << name << " = " << format_double(value) << "\n";
  if (!out_file.empty()) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& [name, value] : values)
      rows.push_back({name, format_double(value)});
    write_csv(out_file, {"quantity", "value"}, rows);
  }
  return 0;
}

int run_train(const ExperimentPlan& plan) {
  ensure_dir(plan.output_dir);
  Eigen::MatrixXd last_adjacency;
  const std::vector<ResultRow> rows = run_plan(plan, &last_adjacency);
  const std::string results_path =
      (fs::path(plan.output_dir) / "results.csv").string();
  write_results_csv(results_path, rows);
  if (!plan.save_adjacency.empty()) {
    if (last_adjacency.size() == 0)
      throw ValidationError("save_adjacency set but no rgsla cell was run");
    save_dense_tsv(last_adjacency,
                   (fs::path(plan.output_dir) / plan.save_adjacency).string());
  }
  std::cout << "wrote " << rows.size() << " rows -> " << results_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust graph structure learning experiments"};
  app.require_subcommand(1);

  // --- gen ---
  auto* gen = app.add_subcommand("gen", "Generate a synthetic block-model graph");
  SyntheticSpec spec;
  std::string gen_out;
  std::string gen_sizes = "30,30";
  gen->add_option("--out", gen_out, "Output graph directory")->required();
  gen->add_option("--sizes", gen_sizes, "Comma-separated block sizes");
  gen->add_option("--p-in", spec.p_in, "Within-block edge probability");
  gen->add_option("--p-out", spec.p_out, "Cross-block edge probability");
  gen->add_option("--feature-dim", spec.feature_dim, "Feature dimension (0: one per block)");
  gen->add_option("--separation", spec.separation, "Block-mean separation scale");
  gen->add_option("--noise-sd", spec.noise_sd, "Feature noise standard deviation");
  gen->add_option("--train-fraction", spec.train_fraction, "Stratified train fraction");
  gen->add_option("--seed", spec.seed, "Generator seed");

  // --- attack ---
  auto* attack = app.add_subcommand("attack", "Write a structure-poisoned copy");
  std::string atk_dataset, atk_out, atk_kind = "feature_difference";
  double atk_rate = 0.1;
  std::uint64_t atk_seed = 99;
  attack->add_option("--dataset", atk_dataset, "Input graph directory")->required();
  attack->add_option("--out", atk_out, "Output graph directory")->required();
  attack->add_option("--kind", atk_kind, "random_flip or feature_difference");
  attack->add_option("--rate", atk_rate, "Perturbation rate in [0, 0.5]");
  attack->add_option("--seed", atk_seed, "Attack seed");

  // --- homophily ---
  auto* hom = app.add_subcommand("homophily", "Per-node same-label neighbor ratios");
  std::string hom_dataset, hom_learned, hom_out;
  hom->add_option("--dataset", hom_dataset, "Input graph directory")->required();
  hom->add_option("--learned", hom_learned, "Optional learned adjacency TSV");
  hom->add_option("--out", hom_out, "Output directory")->required();

  // --- bound ---
  auto* bound = app.add_subcommand("bound", "Evaluate the capacity bounds");
  std::string bnd_dataset, bnd_out;
  BoundParams bparams;
  double bnd_delta = 0.1;
  bool bnd_modal = false;
  bound->add_option("--dataset", bnd_dataset, "Input graph directory")->required();
  bound->add_option("--R", bparams.norm_w1, "Frobenius bound on W1");
  bound->add_option("--D", bparams.norm_w2, "Spectral bound on W2");
  bound->add_option("--lips", bparams.lipschitz, "Activation Lipschitz constant");
  bound->add_option("--B", bparams.max_feature_norm, "Feature norm bound (0: derive)");
  bound->add_option("--q", bparams.common_degree, "Common degree (0: modal)");
  bound->add_option("--beta", bparams.bias_bound, "Bias l1 bound");
  bound->add_option("--omega", bparams.weight_inf_bound, "Weight infinity-norm bound");
  bound->add_option("--layers", bparams.layers, "Layer count K");
  bound->add_option("--delta", bnd_delta, "Gap-bound confidence parameter");
  bound->add_flag("--modal-only", bnd_modal,
                  "Evaluate only over nodes with the modal degree");
  bound->add_option("--out", bnd_out, "Optional CSV output file");

  // --- train ---
  auto* train = app.add_subcommand("train", "Run a training sweep");
  std::string plan_path, train_dataset, train_out, train_methods, train_kinds,
      train_rates, train_prune;
  std::optional<double> ov_gamma1, ov_gamma2, ov_lambda1, ov_alpha, ov_tau, ov_eta,
      ov_eta_structure;
  std::optional<double> ov_theta1, ov_theta2, ov_theta3;
  std::optional<int> ov_outer, ov_inner_i, ov_inner_j, ov_hidden, ov_proj, ov_repeat;
  std::optional<std::uint64_t> ov_base_seed, ov_attack_seed;
  std::optional<bool> ov_include_gnn;
  bool ov_wall = false;
  std::string ov_save_adj;
  train->add_option("--plan", plan_path, "Plan file (flat key = value with sections)");
  train->add_option("--dataset", train_dataset, "Graph directory (else synthetic)");
  train->add_option("--out", train_out, "Output directory");
  train->add_option("--methods", train_methods, "Comma list: plain_gcn,rgsla");
  train->add_option("--kinds", train_kinds, "Comma list of attack kinds");
  train->add_option("--rates", train_rates, "Comma list of rates");
  train->add_option("--repeat", ov_repeat, "Seeds per cell");
  train->add_option("--base-seed", ov_base_seed, "First training seed");
  train->add_option("--attack-seed", ov_attack_seed, "Attack seed");
  train->add_option("--gamma1", ov_gamma1, "Smoothness weight");
  train->add_option("--gamma2", ov_gamma2, "Alignment weight");
  train->add_option("--lambda1", ov_lambda1, "Selector l1 weight");
  train->add_option("--theta1", ov_theta1, "Alternative smoothness weight");
  train->add_option("--theta2", ov_theta2, "Alternative l1 weight (gamma1*lambda1)");
  train->add_option("--theta3", ov_theta3, "Alternative alignment weight");
  train->add_option("--alpha", ov_alpha, "Blend weight");
  train->add_option("--tau", ov_tau, "Kernel width");
  train->add_option("--eta", ov_eta, "GCN step size");
  train->add_option("--eta-structure", ov_eta_structure, "Structure step size");
  train->add_option("--outer-steps", ov_outer, "Outer iterations T");
  train->add_option("--structure-inner", ov_inner_i, "Structure inner iterations I");
  train->add_option("--gcn-inner", ov_inner_j, "GCN inner iterations J");
  train->add_option("--hidden", ov_hidden, "Hidden width");
  train->add_option("--projection-dim", ov_proj, "Projection dimension (0: full)");
  train->add_option("--prune", train_prune, "none, knn:<k>, or epsilon:<x>");
  train->add_option("--include-gnn", ov_include_gnn,
                    "Include the GNN chain in the structure step");
  train->add_flag("--record-wall-ms", ov_wall, "Record wall time (breaks byte-identity)");
  train->add_option("--save-adjacency", ov_save_adj,
                    "Write the last rgsla learned adjacency to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) {
      spec.sizes = parse_size_list(gen_sizes);
      return run_gen(spec, gen_out);
    }
    if (attack->parsed()) return run_attack(atk_dataset, atk_kind, atk_rate, atk_seed, atk_out);
    if (hom->parsed()) return run_homophily(hom_dataset, hom_learned, hom_out);
    if (bound->parsed()) return run_bound(bnd_dataset, bparams, bnd_delta, bnd_modal, bnd_out);
    if (train->parsed()) {
      ExperimentPlan plan;
      if (!plan_path.empty()) plan = parse_plan_file(plan_path);
      if (!train_dataset.empty()) plan.dataset_path = train_dataset;
      if (!train_out.empty()) plan.output_dir = train_out;
      if (!train_methods.empty()) {
        plan.methods.clear();
        std::stringstream ss(train_methods);
        std::string item;
        while (std::getline(ss, item, ',')) plan.methods.push_back(item);
      }
      if (!train_kinds.empty()) {
        plan.attack_kinds.clear();
        std::stringstream ss(train_kinds);
        std::string item;
        while (std::getline(ss, item, ','))
          plan.attack_kinds.push_back(attack_kind_from_string(item));
      }
      if (!train_rates.empty()) plan.rates = parse_rate_list(train_rates);
      if (ov_repeat) plan.repeat = *ov_repeat;
      if (ov_base_seed) plan.base_seed = *ov_base_seed;
      if (ov_attack_seed) plan.attack_seed = *ov_attack_seed;
      if (ov_gamma1) plan.train.gamma1 = *ov_gamma1;
      if (ov_gamma2) plan.train.gamma2 = *ov_gamma2;
      if (ov_lambda1) plan.train.lambda1 = *ov_lambda1;
      if (ov_theta1 || ov_theta2 || ov_theta3)
        plan.train.set_theta(ov_theta1.value_or(0.0), ov_theta2.value_or(0.0),
                             ov_theta3.value_or(0.0));
      if (ov_alpha) plan.train.alpha = *ov_alpha;
      if (ov_tau) plan.train.tau = *ov_tau;
      if (ov_eta) plan.train.eta = *ov_eta;
      if (ov_eta_structure) plan.train.eta_structure = *ov_eta_structure;
      if (ov_outer) plan.train.outer_steps = *ov_outer;
      if (ov_inner_i) plan.train.structure_inner = *ov_inner_i;
      if (ov_inner_j) plan.train.gcn_inner = *ov_inner_j;
      if (ov_hidden) plan.train.hidden = *ov_hidden;
      if (ov_proj) plan.train.projection_dim = *ov_proj;
      if (!train_prune.empty()) plan.train.prune = parse_prune_policy(train_prune);
      if (ov_include_gnn) plan.train.include_gnn_in_structure_step = *ov_include_gnn;
      if (ov_wall) plan.record_wall_ms = true;
      if (!ov_save_adj.empty()) plan.save_adjacency = ov_save_adj;
      return run_train(plan);
    }
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
