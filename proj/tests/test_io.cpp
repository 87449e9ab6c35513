#include <doctest.h>

#include <Eigen/Dense>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "csv_checker.hpp"
#include "rgsl/errors.hpp"
#include "rgsl/graph_io.hpp"
#include "rgsl/plan.hpp"
#include "test_util.hpp"

using namespace rgsl;
using namespace rgsl::testing;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / ("rgsl_test_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("format_double: shortest representation round-trips") {
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const double v = rng.normal() * std::pow(10.0, rng.uniform(-8, 8));
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.25) == "0.25");
  CHECK(format_double(1.0) == "1");
}

TEST_CASE("graph directory: save and load round-trip") {
  TempDir tmp("graph_rt");
  const Eigen::MatrixXd means = 2.0 * Eigen::MatrixXd::Identity(3, 3);
  const Graph g = sbm_generate({4, 5, 6}, 0.6, 0.1, means, 0.8, 13);
  save_graph_dir(g, tmp.path.string());
  const Graph loaded = load_graph_dir(tmp.path.string());

  CHECK(loaded.n == g.n);
  CHECK(loaded.d == g.d);
  CHECK(loaded.num_classes == g.num_classes);
  CHECK(loaded.adjacency == g.adjacency);
  CHECK(loaded.features == g.features);  // exact via shortest round-trip format
  CHECK(loaded.labels == g.labels);
  CHECK((loaded.train_mask == g.train_mask).all());
  CHECK((loaded.test_mask == g.test_mask).all());
}

TEST_CASE("graph directory: missing files raise IoError") {
  CHECK_THROWS_AS(load_graph_dir("/nonexistent/rgsl_dir"), IoError);
}

TEST_CASE("graph directory: malformed content is rejected") {
  TempDir tmp("graph_bad");
  const Eigen::MatrixXd means = Eigen::MatrixXd::Identity(2, 2);
  const Graph g = sbm_generate({3, 3}, 1.0, 0.0, means, 0.1, 3);
  save_graph_dir(g, tmp.path.string());

  SUBCASE("edge index out of range") {
    std::ofstream(tmp.path / "edges.tsv", std::ios::app) << "0\t99\n";
    CHECK_THROWS_AS(load_graph_dir(tmp.path.string()), ValidationError);
  }
  SUBCASE("edge with i >= j") {
    std::ofstream(tmp.path / "edges.tsv", std::ios::app) << "4\t1\n";
    CHECK_THROWS_AS(load_graph_dir(tmp.path.string()), ValidationError);
  }
  SUBCASE("unknown split tag") {
    std::ofstream(tmp.path / "split.tsv") << "train\nvalidation\n";
    CHECK_THROWS_AS(load_graph_dir(tmp.path.string()), IoError);
  }
  SUBCASE("label out of range") {
    std::ofstream(tmp.path / "labels.tsv") << "0\n0\n0\n5\n1\n1\n";
    CHECK_THROWS_AS(load_graph_dir(tmp.path.string()), ValidationError);
  }
}

TEST_CASE("dense tsv: round-trip is exact") {
  TempDir tmp("dense");
  Rng rng(2);
  const Eigen::MatrixXd m = random_matrix(7, 5, rng, 3.0);
  const std::string path = (tmp.path / "m.tsv").string();
  save_dense_tsv(m, path);
  CHECK(load_dense_tsv(path) == m);
}

TEST_CASE("write_csv: strict RFC 4180 output with quoting") {
  TempDir tmp("csv");
  const std::string path = (tmp.path / "t.csv").string();
  write_csv(path, {"a", "b"},
            {{"plain", "with,comma"}, {"with\"quote", "fine"}});
  const auto records = read_strict_csv(path);
  REQUIRE(records.size() == 3);
  CHECK(records[0] == std::vector<std::string>{"a", "b"});
  CHECK(records[1] == std::vector<std::string>{"plain", "with,comma"});
  CHECK(records[2] == std::vector<std::string>{"with\"quote", "fine"});
}

TEST_CASE("plan parsing: full file with sections") {
  const ExperimentPlan plan = parse_plan_text(R"(
# comment line
[dataset]
sizes = 10, 10
p_in = 0.6
noise_sd = 0.3
seed = 21

[attack]
kinds = random_flip, feature_difference
rates = 0, 0.1, 0.2
seed = 5

[train]
methods = plain_gcn, rgsla
repeat = 3
base_seed = 100
gamma1 = 0.2
lambda1 = 0.05
alpha = 0.7
prune = knn:6
outer_steps = 9

[output]
dir = results
record_wall_ms = false
)");
  CHECK(plan.synthetic.sizes == std::vector<int>{10, 10});
  CHECK(plan.synthetic.p_in == 0.6);
  CHECK(plan.attack_kinds.size() == 2);
  CHECK(plan.rates == std::vector<double>{0.0, 0.1, 0.2});
  CHECK(plan.repeat == 3);
  CHECK(plan.base_seed == 100);
  CHECK(plan.train.gamma1 == 0.2);
  CHECK(plan.train.prune.kind == PruneKind::knn);
  CHECK(plan.train.prune.k == 6);
  CHECK(plan.train.outer_steps == 9);
  CHECK(plan.output_dir == "results");
  CHECK_FALSE(plan.record_wall_ms);
}

TEST_CASE("plan parsing: theta keys convert and cannot mix with gammas") {
  const ExperimentPlan plan = parse_plan_text(
      "[train]\ntheta1 = 0.4\ntheta2 = 0.1\ntheta3 = 0.2\n");
  CHECK(plan.train.gamma1 == 0.4);
  CHECK(plan.train.lambda1 == doctest::Approx(0.25));
  CHECK(plan.train.gamma2 == 0.2);

  CHECK_THROWS_AS(parse_plan_text("[train]\ntheta1 = 0.4\ngamma1 = 0.1\n"),
                  ValidationError);
}

TEST_CASE("plan parsing: unknown keys and malformed lines are rejected") {
  CHECK_THROWS_AS(parse_plan_text("[train]\nbogus = 1\n"), ValidationError);
  CHECK_THROWS_AS(parse_plan_text("[train]\nno equals sign\n"), ValidationError);
  CHECK_THROWS_AS(parse_plan_text("[train\ngamma1 = 1\n"), ValidationError);
  CHECK_THROWS_AS(parse_plan_text("[attack]\nrates = 0.7\n"), ValidationError);
  CHECK_THROWS_AS(parse_plan_text("[train]\nprune = w:1\n"), ValidationError);
}

TEST_CASE("run_plan: row accounting and byte determinism") {
  TempDir tmp("plan_run");
  ExperimentPlan plan;
  plan.synthetic.sizes = {8, 8};
  plan.synthetic.noise_sd = 0.4;
  plan.rates = {0.0, 0.2};
  plan.attack_kinds = {AttackKind::feature_difference};
  plan.methods = {"plain_gcn", "rgsla"};
  plan.repeat = 2;
  plan.train.outer_steps = 3;
  plan.train.alpha = 0.5;
  plan.train.gamma1 = 0.1;

  const auto rows = run_plan(plan);
  CHECK(rows.size() == 2 * 2 * 2);  // kinds x rates x methods x seeds

  const std::string p1 = (tmp.path / "a.csv").string();
  const std::string p2 = (tmp.path / "b.csv").string();
  write_results_csv(p1, rows);
  write_results_csv(p2, run_plan(plan));

  std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
  std::stringstream s1, s2;
  s1 << f1.rdbuf();
  s2 << f2.rdbuf();
  CHECK(s1.str() == s2.str());

  const auto records = read_strict_csv(p1);
  CHECK(records.size() == 9);  // header + 8 rows
  CHECK(records.front().front() == "method");
}
