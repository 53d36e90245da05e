#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "oracles.hpp"
#include "spectral_transfer/graphreg.hpp"

using namespace spectral_transfer;
using namespace spectral_transfer::graphreg;

TEST_CASE("build_graph pairs row i of each block and nothing else") {
  const GraphMatrices g = build_graph(2);
  Eigen::MatrixXd expected(4, 4);
  expected << 0, 0, 1, 0,
              0, 0, 0, 1,
              1, 0, 0, 0,
              0, 1, 0, 0;
  CHECK((g.adjacency - expected).norm() == doctest::Approx(0.0));
  CHECK((g.degree - Eigen::MatrixXd::Identity(4, 4)).norm() == doctest::Approx(0.0));
  CHECK((g.laplacian - (g.degree - g.adjacency)).norm() == doctest::Approx(0.0));
}

TEST_CASE("build_graph with one pair gives the 2x2 Laplacian block") {
  const GraphMatrices g = build_graph(1);
  Eigen::MatrixXd expected(2, 2);
  expected << 1, -1, -1, 1;
  CHECK((g.laplacian - expected).norm() == doctest::Approx(0.0));
}

TEST_CASE("Laplacian eigenvalues are zero and two, each with multiplicity K") {
  for (int k : {1, 3, 5}) {
    const GraphMatrices g = build_graph(k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.laplacian);
    const Eigen::VectorXd ev = es.eigenvalues();
    for (int i = 0; i < k; ++i) {
      CHECK(std::abs(ev(i)) <= 1e-10);
      CHECK(std::abs(ev(k + i) - 2.0) <= 1e-10);
    }
    CHECK(ev.minCoeff() >= -1e-12);  // positive semi-definite
  }
}

TEST_CASE("build_graph rejects a non-positive pair count") {
  CHECK_THROWS_AS(build_graph(0), InputError);
}

TEST_CASE("regularizer vanishes for identical instruments") {
  const Eigen::MatrixXd xp = oracle::random_matrix(3, 6, 17);
  const RegularizerMatrix reg = regularizer(xp, xp);
  CHECK(reg.dense().norm() == doctest::Approx(0.0));
  CHECK(reg.quadratic_form(oracle::random_vector(6, 18)) == doctest::Approx(0.0));
}

TEST_CASE("regularizer matches the hand-computed single-pair case") {
  Eigen::MatrixXd xp(1, 2);
  xp << 1, 0;
  Eigen::MatrixXd xs(1, 2);
  xs << 0, 1;
  Eigen::MatrixXd expected(2, 2);
  expected << 1, -1, -1, 1;
  CHECK((regularizer(xp, xs).dense() - expected).norm() == doctest::Approx(0.0));
}

TEST_CASE("stacked graph form and difference form agree") {
  const Eigen::MatrixXd xp = oracle::random_matrix(3, 10, 23);
  const Eigen::MatrixXd xs = oracle::random_matrix(3, 10, 24);

  // Independent route: stack the blocks and evaluate K' L K directly.
  const GraphMatrices g = build_graph(3);
  Eigen::MatrixXd stacked(6, 10);
  stacked << xp, xs;
  const Eigen::MatrixXd via_graph = stacked.transpose() * g.laplacian * stacked;

  const Eigen::MatrixXd via_factor = regularizer(xp, xs).dense();
  CHECK((via_graph - via_factor).cwiseAbs().maxCoeff() <=
        1e-12 * via_graph.cwiseAbs().maxCoeff());
}

TEST_CASE("storage mode follows the channel count and can be forced") {
  const Eigen::MatrixXd xp = oracle::random_matrix(3, 50, 31);
  const Eigen::MatrixXd xs = oracle::random_matrix(3, 50, 32);
  CHECK_FALSE(regularizer(xp, xs).stores_dense());  // 50 > 4 * 3
  CHECK(regularizer(xp, xs, RegularizerStorage::kDense).stores_dense());

  const Eigen::MatrixXd xp_small = oracle::random_matrix(3, 8, 33);
  const Eigen::MatrixXd xs_small = oracle::random_matrix(3, 8, 34);
  CHECK(regularizer(xp_small, xs_small).stores_dense());  // 8 <= 12

  // Both storages give the same quadratic form and matrix action.
  const RegularizerMatrix factored = regularizer(xp, xs, RegularizerStorage::kFactored);
  const RegularizerMatrix dense = regularizer(xp, xs, RegularizerStorage::kDense);
  const Eigen::VectorXd w = oracle::random_vector(50, 35);
  CHECK(factored.quadratic_form(w) ==
        doctest::Approx(dense.quadratic_form(w)).epsilon(1e-12));
  CHECK((factored.apply(w) - dense.apply(w)).norm() <= 1e-10 * dense.apply(w).norm());
}

TEST_CASE("penalty value matches the pairwise double sum") {
  const Eigen::MatrixXd xp = oracle::random_matrix(4, 7, 41);
  const Eigen::MatrixXd xs = oracle::random_matrix(4, 7, 42);
  const Eigen::VectorXd w = oracle::random_vector(7, 43);

  const double via_reg = regularizer_value(w, regularizer(xp, xs));
  const double via_sum = oracle::double_sum_penalty(xp, xs, build_graph(4).adjacency, w);
  CHECK(via_reg == doctest::Approx(via_sum).epsilon(1e-10));
  CHECK(via_reg >= 0.0);
}

TEST_CASE("penalty is zero for a zero vector and for identical blocks") {
  const Eigen::MatrixXd xp = oracle::random_matrix(2, 5, 51);
  CHECK(regularizer_value(Eigen::VectorXd::Zero(5), regularizer(xp, oracle::random_matrix(2, 5, 52))) ==
        doctest::Approx(0.0));
  CHECK(regularizer_value(oracle::random_vector(5, 53), regularizer(xp, xp)) ==
        doctest::Approx(0.0));
}

TEST_CASE("penalty matrix is symmetric PSD with rank at most K") {
  for (unsigned seed : {61u, 62u}) {
    const Eigen::MatrixXd xp = oracle::random_matrix(3, 12, seed);
    const Eigen::MatrixXd xs = oracle::random_matrix(3, 12, seed + 10);
    const Eigen::MatrixXd gamma = regularizer(xp, xs).dense();
    CHECK((gamma - gamma.transpose()).norm() <= 1e-12 * gamma.norm());

    Eigen::BDCSVD<Eigen::MatrixXd> svd(gamma);
    const Eigen::VectorXd sv = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > 1e-10 * sv(0)) {
        ++rank;
      }
    }
    CHECK(rank <= 3);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gamma);
    CHECK(es.eigenvalues().minCoeff() >= -1e-12 * gamma.norm());
  }
}

TEST_CASE("regularizer rejects mismatched standards shapes") {
  CHECK_THROWS_AS(regularizer(oracle::random_matrix(2, 5, 71), oracle::random_matrix(3, 5, 72)),
                  InputError);
  const RegularizerMatrix reg =
      regularizer(oracle::random_matrix(2, 5, 73), oracle::random_matrix(2, 5, 74));
  CHECK_THROWS_AS(reg.quadratic_form(Eigen::VectorXd::Zero(4)), InputError);
}
