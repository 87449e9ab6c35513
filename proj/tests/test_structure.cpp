#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "rgsl/errors.hpp"
#include "rgsl/structure.hpp"
#include "test_util.hpp"

using namespace rgsl;
using namespace rgsl::testing;

namespace {

StructureParams random_structure(int d, int p, double tau, Rng& rng) {
  StructureParams sp;
  sp.projection = random_matrix(p, d, rng);
  sp.selector = random_vector(d, rng);
  sp.tau = tau;
  sp.alpha = 0.5;
  return sp;
}

}  // namespace

TEST_CASE("transform_features: identity projection and unit selector is a no-op") {
  Rng rng(1);
  const Eigen::MatrixXd x = random_matrix(5, 4, rng);
  const StructureParams sp = StructureParams::identity_init(4, 4, 1.0, 0.0);
  CHECK(transform_features(sp, x) == x);
}

TEST_CASE("transform_features: zero selector wipes the output") {
  Rng rng(2);
  const Eigen::MatrixXd x = random_matrix(5, 4, rng);
  StructureParams sp = StructureParams::identity_init(4, 3, 1.0, 0.0);
  sp.selector.setZero();
  CHECK(transform_features(sp, x).isZero(0.0));
}

TEST_CASE("transform_features: matches the per-row loop") {
  Rng rng(3);
  const Eigen::MatrixXd x = random_matrix(5, 4, rng);
  const StructureParams sp = random_structure(4, 3, 1.0, rng);
  const Eigen::MatrixXd got = transform_features(sp, x);
  for (int i = 0; i < 5; ++i) {
    const Eigen::VectorXd selected = sp.selector.cwiseProduct(x.row(i).transpose());
    CHECK((got.row(i).transpose() - sp.projection * selected).cwiseAbs().maxCoeff() <=
          1e-12);
  }
}

TEST_CASE("transform_features: rejects shape mismatches") {
  Rng rng(4);
  const Eigen::MatrixXd x = random_matrix(5, 4, rng);
  const StructureParams sp = StructureParams::identity_init(3, 3, 1.0, 0.0);
  CHECK_THROWS_AS(transform_features(sp, x), ValidationError);
}

TEST_CASE("pairwise_sq_distances: identical rows give the zero matrix") {
  const Eigen::MatrixXd x = Eigen::MatrixXd::Ones(4, 3);
  CHECK(pairwise_sq_distances(x).isZero(0.0));
}

TEST_CASE("pairwise_sq_distances: a 3-4-5 pair") {
  Eigen::MatrixXd x(2, 2);
  x << 0, 0, 3, 4;
  CHECK(pairwise_sq_distances(x)(0, 1) == doctest::Approx(25.0).epsilon(1e-12));
}

TEST_CASE("pairwise_sq_distances: matches the double-loop oracle") {
  Rng rng(5);
  const Eigen::MatrixXd x = random_matrix(7, 3, rng);
  const Eigen::MatrixXd got = pairwise_sq_distances(x);
  for (int i = 0; i < 7; ++i) {
    CHECK(got(i, i) == 0.0);
    for (int j = 0; j < 7; ++j) {
      CHECK(std::abs(got(i, j) - (x.row(i) - x.row(j)).squaredNorm()) <= 1e-9);
      CHECK(got(i, j) == got(j, i));
      CHECK(got(i, j) >= 0.0);
    }
  }
}

TEST_CASE("similarity_matrix: coincident points have similarity 1") {
  Eigen::MatrixXd x(3, 2);
  x << 1, 2, 1, 2, 5, 5;
  const StructureParams sp = StructureParams::identity_init(2, 2, 1.0, 0.0);
  const LearnedGraph lg = similarity_matrix(sp, x);
  CHECK(lg.similarity(0, 1) == 1.0);
  CHECK(lg.similarity(0, 0) == 0.0);
}

TEST_CASE("similarity_matrix: distance 2 tau^2 maps to exp(-1)") {
  const double tau = 0.7;
  Eigen::MatrixXd x(2, 1);
  x << 0.0, std::sqrt(2.0) * tau;  // squared distance = 2 tau^2
  const StructureParams sp = StructureParams::identity_init(1, 1, tau, 0.0);
  CHECK(similarity_matrix(sp, x).similarity(0, 1) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("similarity_matrix: huge tau saturates off-diagonals at 1") {
  Rng rng(6);
  const Eigen::MatrixXd x = random_matrix(5, 3, rng);
  const StructureParams sp = StructureParams::identity_init(3, 3, 1e6, 0.0);
  const LearnedGraph lg = similarity_matrix(sp, x);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      if (i != j) CHECK(lg.similarity(i, j) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("similarity_matrix: symmetric with range [0,1] and zero diagonal") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd x = random_matrix(6, 4, rng, 2.0);
    const StructureParams sp = random_structure(4, 2, 0.5 + rng.uniform(), rng);
    const LearnedGraph lg = similarity_matrix(sp, x);
    CHECK(lg.similarity == lg.similarity.transpose().eval());
    CHECK(lg.similarity.minCoeff() >= 0.0);
    CHECK(lg.similarity.maxCoeff() <= 1.0);
    CHECK(lg.similarity.diagonal().isZero(0.0));
    CHECK((lg.degree - lg.similarity.rowwise().sum()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("blend_adjacency: endpoints and midpoint") {
  Rng rng(8);
  const Eigen::MatrixXd a = random_binary_adjacency(5, 0.5, rng);
  const Eigen::MatrixXd at = random_symmetric_nonneg(5, rng);
  CHECK(blend_adjacency(a, at, 0.0) == a);
  CHECK(blend_adjacency(a, at, 1.0) == at);

  Eigen::MatrixXd one(1, 1), fifth(1, 1);
  one << 1.0;
  fifth << 0.2;
  CHECK(blend_adjacency(one, fifth, 0.5)(0, 0) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK_THROWS_AS(blend_adjacency(a, at, 1.5), ValidationError);
}

TEST_CASE("prox_l1: closed-form example") {
  Eigen::VectorXd v(3);
  v << 2.0, -0.5, 0.3;
  const Eigen::VectorXd out = prox_l1(v, 0.5);
  CHECK(out[0] == 1.5);
  CHECK(out[1] == 0.0);
  CHECK(out[2] == 0.0);
}

TEST_CASE("prox_l1: zero threshold is the identity; negative threshold rejected") {
  Rng rng(9);
  const Eigen::VectorXd v = random_vector(6, rng);
  CHECK(prox_l1(v, 0.0) == v);
  CHECK_THROWS_AS(prox_l1(v, -0.1), ValidationError);
}

TEST_CASE("prox_l1: matches the per-element oracle") {
  Rng rng(10);
  const Eigen::VectorXd v = random_vector(20, rng, 2.0);
  const double t = 0.8;
  const Eigen::VectorXd got = prox_l1(v, t);
  for (int i = 0; i < 20; ++i) {
    const double expect =
        (v[i] > 0 ? 1.0 : -1.0) * std::max(std::abs(v[i]) - t, 0.0);
    CHECK(got[i] == expect);
  }
}

TEST_CASE("prox_l1: non-expansive on random pairs") {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::VectorXd u = random_vector(8, rng, 3.0);
    const Eigen::VectorXd v = random_vector(8, rng, 3.0);
    const double t = rng.uniform();
    CHECK((prox_l1(u, t) - prox_l1(v, t)).norm() <= (u - v).norm() + 1e-12);
  }
}

TEST_CASE("kernel_gradients: zero upstream gives zero gradients") {
  Rng rng(12);
  const Eigen::MatrixXd x = random_matrix(4, 3, rng);
  const StructureParams sp = random_structure(3, 2, 0.8, rng);
  const auto [gm, ga] = kernel_gradients(sp, x, Eigen::MatrixXd::Zero(4, 4));
  CHECK(gm.isZero(0.0));
  CHECK(ga.isZero(0.0));
}

TEST_CASE("kernel_gradients: zero selector kills the projection gradient") {
  Rng rng(13);
  const Eigen::MatrixXd x = random_matrix(4, 3, rng);
  StructureParams sp = random_structure(3, 2, 0.8, rng);
  sp.selector.setZero();
  Eigen::MatrixXd upstream = random_symmetric_nonneg(4, rng);
  upstream.diagonal().setZero();
  const auto [gm, ga] = kernel_gradients(sp, x, upstream);
  CHECK(gm.isZero(0.0));
}

TEST_CASE("kernel_gradients: matches finite differences on 20 random instances") {
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng(100 + static_cast<std::uint64_t>(trial));
    const Eigen::MatrixXd x = random_matrix(4, 3, rng);
    const StructureParams sp = random_structure(3, 2, 0.6 + rng.uniform(), rng);
    Eigen::MatrixXd upstream = random_symmetric_nonneg(4, rng);
    upstream.diagonal().setZero();

    const auto [gm, ga] = kernel_gradients(sp, x, upstream);

    const auto objective_m = [&](const Eigen::MatrixXd& m) {
      StructureParams probe = sp;
      probe.projection = m;
      return upstream.cwiseProduct(similarity_matrix(probe, x).similarity).sum();
    };
    const auto objective_a = [&](const Eigen::VectorXd& a) {
      StructureParams probe = sp;
      probe.selector = a;
      return upstream.cwiseProduct(similarity_matrix(probe, x).similarity).sum();
    };

    CHECK(relative_error(gm, finite_diff_matrix(objective_m, sp.projection)) < 1e-4);
    CHECK(relative_error(ga, finite_diff_vector(objective_a, sp.selector)) < 1e-4);
  }
}
