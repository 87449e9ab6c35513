#include "rgsl/plan.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "rgsl/errors.hpp"
#include "rgsl/graph_io.hpp"

namespace rgsl {

Graph generate_synthetic(const SyntheticSpec& spec) {
  const int blocks = static_cast<int>(spec.sizes.size());
  const int d = spec.feature_dim > 0 ? spec.feature_dim : blocks;
  if (blocks > d)
    throw ValidationError("synthetic: feature_dim must be >= number of blocks");
  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(blocks, d);
  for (int b = 0; b < blocks; ++b) means(b, b) = spec.separation;
  return sbm_generate(spec.sizes, spec.p_in, spec.p_out, means, spec.noise_sd,
                      spec.seed, spec.train_fraction);
}

void ExperimentPlan::validate() const {
  if (repeat < 1) throw ValidationError("plan: repeat must be >= 1");
  if (attack_kinds.empty()) throw ValidationError("plan: no attack kinds");
  if (rates.empty()) throw ValidationError("plan: no rates");
  for (double r : rates)
    if (!(r >= 0.0 && r <= 0.5))
      throw ValidationError("plan: rates must lie in [0, 0.5]");
  if (methods.empty()) throw ValidationError("plan: no methods");
  for (const auto& m : methods)
    if (m != "plain_gcn" && m != "rgsla")
      throw ValidationError("plan: unknown method '" + m + "'");
  train.validate();
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("plan: bad number for " + key + ": '" + value + "'");
  }
}

long to_long(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long v = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("plan: bad integer for " + key + ": '" + value + "'");
  }
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ValidationError("plan: bad boolean for " + key + ": '" + value + "'");
}

}  // namespace

PrunePolicy parse_prune_policy(const std::string& value) {
  PrunePolicy policy;
  if (value == "none") return policy;
  const auto colon = value.find(':');
  const std::string head = value.substr(0, colon);
  if (head == "knn") {
    if (colon == std::string::npos)
      throw ValidationError("plan: prune knn needs a k, e.g. knn:10");
    policy.kind = PruneKind::knn;
    policy.k = static_cast<int>(to_long("prune", value.substr(colon + 1)));
    return policy;
  }
  if (head == "epsilon") {
    if (colon == std::string::npos)
      throw ValidationError("plan: prune epsilon needs a value, e.g. epsilon:0.3");
    policy.kind = PruneKind::epsilon;
    policy.eps = to_double("prune", value.substr(colon + 1));
    return policy;
  }
  throw ValidationError("plan: unknown prune policy '" + value + "'");
}

ExperimentPlan parse_plan_text(const std::string& text) {
  std::map<std::string, std::string> entries;
  std::string section;
  std::stringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ValidationError("plan: malformed section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("plan: expected key = value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ValidationError("plan: empty key");
    const std::string full = section.empty() ? key : section + "." + key;
    if (!entries.emplace(full, value).second)
      throw ValidationError("plan: duplicate key '" + full + "'");
  }

  ExperimentPlan plan;
  bool theta_seen = false;
  bool gamma_seen = false;
  double theta1 = 0.0, theta2 = 0.0, theta3 = 0.0;

  for (const auto& [key, value] : entries) {
    if (key == "dataset.path") plan.dataset_path = value;
    else if (key == "dataset.sizes") {
      plan.synthetic.sizes.clear();
      for (const auto& item : split_csv_list(value))
        plan.synthetic.sizes.push_back(static_cast<int>(to_long(key, item)));
    }
    else if (key == "dataset.p_in") plan.synthetic.p_in = to_double(key, value);
    else if (key == "dataset.p_out") plan.synthetic.p_out = to_double(key, value);
    else if (key == "dataset.feature_dim")
      plan.synthetic.feature_dim = static_cast<int>(to_long(key, value));
    else if (key == "dataset.separation") plan.synthetic.separation = to_double(key, value);
    else if (key == "dataset.noise_sd") plan.synthetic.noise_sd = to_double(key, value);
    else if (key == "dataset.train_fraction")
      plan.synthetic.train_fraction = to_double(key, value);
    else if (key == "dataset.seed")
      plan.synthetic.seed = static_cast<std::uint64_t>(to_long(key, value));
    else if (key == "attack.kinds") {
      plan.attack_kinds.clear();
      for (const auto& item : split_csv_list(value))
        plan.attack_kinds.push_back(attack_kind_from_string(item));
    }
    else if (key == "attack.rates") {
      plan.rates.clear();
      for (const auto& item : split_csv_list(value))
        plan.rates.push_back(to_double(key, item));
    }
    else if (key == "attack.seed")
      plan.attack_seed = static_cast<std::uint64_t>(to_long(key, value));
    else if (key == "train.methods") plan.methods = split_csv_list(value);
    else if (key == "train.repeat") plan.repeat = static_cast<int>(to_long(key, value));
    else if (key == "train.base_seed")
      plan.base_seed = static_cast<std::uint64_t>(to_long(key, value));
    else if (key == "train.gamma1") { plan.train.gamma1 = to_double(key, value); gamma_seen = true; }
    else if (key == "train.gamma2") { plan.train.gamma2 = to_double(key, value); gamma_seen = true; }
    else if (key == "train.lambda1") { plan.train.lambda1 = to_double(key, value); gamma_seen = true; }
    else if (key == "train.theta1") { theta1 = to_double(key, value); theta_seen = true; }
    else if (key == "train.theta2") { theta2 = to_double(key, value); theta_seen = true; }
    else if (key == "train.theta3") { theta3 = to_double(key, value); theta_seen = true; }
    else if (key == "train.alpha") plan.train.alpha = to_double(key, value);
    else if (key == "train.tau") plan.train.tau = to_double(key, value);
    else if (key == "train.eta") plan.train.eta = to_double(key, value);
    else if (key == "train.eta_structure") plan.train.eta_structure = to_double(key, value);
    else if (key == "train.outer_steps")
      plan.train.outer_steps = static_cast<int>(to_long(key, value));
    else if (key == "train.structure_inner")
      plan.train.structure_inner = static_cast<int>(to_long(key, value));
    else if (key == "train.gcn_inner")
      plan.train.gcn_inner = static_cast<int>(to_long(key, value));
    else if (key == "train.hidden") plan.train.hidden = static_cast<int>(to_long(key, value));
    else if (key == "train.projection_dim")
      plan.train.projection_dim = static_cast<int>(to_long(key, value));
    else if (key == "train.prune") plan.train.prune = parse_prune_policy(value);
    else if (key == "train.include_gnn_in_structure_step")
      plan.train.include_gnn_in_structure_step = to_bool(key, value);
    else if (key == "output.dir") plan.output_dir = value;
    else if (key == "output.record_wall_ms") plan.record_wall_ms = to_bool(key, value);
    else if (key == "output.save_adjacency") plan.save_adjacency = value;
    else throw ValidationError("plan: unknown key '" + key + "'");
  }

  if (theta_seen && gamma_seen)
    throw ValidationError("plan: use either gamma/lambda keys or theta keys, not both");
  if (theta_seen) plan.train.set_theta(theta1, theta2, theta3);

  plan.validate();
  return plan;
}

ExperimentPlan parse_plan_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open plan file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_plan_text(buffer.str());
}

Graph plan_dataset(const ExperimentPlan& plan) {
  if (!plan.dataset_path.empty()) return load_graph_dir(plan.dataset_path);
  return generate_synthetic(plan.synthetic);
}

std::vector<ResultRow> run_plan(const ExperimentPlan& plan,
                                Eigen::MatrixXd* last_rgsla_adjacency) {
  plan.validate();
  const Graph base = plan_dataset(plan);

  std::vector<ResultRow> rows;
  for (AttackKind kind : plan.attack_kinds) {
    for (double rate : plan.rates) {
      Graph poisoned = base;
      poisoned.adjacency = apply_attack(base, {kind, rate, plan.attack_seed});
      for (const auto& method : plan.methods) {
        for (int s = 0; s < plan.repeat; ++s) {
          const std::uint64_t seed = plan.base_seed + static_cast<std::uint64_t>(s);
          TrainReport report;
          if (method == "plain_gcn") {
            const int epochs = plan.train.outer_steps * plan.train.structure_inner *
                               plan.train.gcn_inner;
            report = train_plain_gcn(poisoned, plan.train.eta, epochs,
                                     plan.train.hidden, seed);
          } else {
            TrainConfig cfg = plan.train;
            cfg.seed = seed;
            report = run_rgsla(poisoned, cfg);
            if (last_rgsla_adjacency) *last_rgsla_adjacency = report.learned_adjacency;
          }
          const IterationLog& last = report.iterations.back();
          rows.push_back({method, to_string(kind), rate, seed,
                          report.test_accuracy, last.l_gnn, last.l_ss,
                          last.l_align,
                          plan.record_wall_ms ? report.wall_ms : 0.0});
        }
      }
    }
  }
  return rows;
}

namespace {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  const auto write_row = [&out](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << csv_escape(row[i]);
    }
    out << "\r\n";
  };
  write_row(header);
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw ValidationError("csv row arity differs from header");
    write_row(row);
  }
}

void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows) {
  std::vector<std::vector<std::string>> cells;
  cells.reserve(rows.size());
  for (const auto& r : rows)
    cells.push_back({r.method, r.attack, format_double(r.rate),
                     std::to_string(r.seed), format_double(r.accuracy),
                     format_double(r.l_gnn), format_double(r.l_ss),
                     format_double(r.l_align), format_double(r.wall_ms)});
  write_csv(path,
            {"method", "attack", "rate", "seed", "accuracy", "l_gnn", "l_ss",
             "l_align", "wall_ms"},
            cells);
}

}  // namespace rgsl
