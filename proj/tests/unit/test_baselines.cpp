#include <doctest.h>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "spectral_transfer/baselines.hpp"
#include "spectral_transfer/gctpls.hpp"

using namespace spectral_transfer;
using namespace spectral_transfer::baselines;

namespace {

StandardsPair make_standards(Eigen::MatrixXd primary, Eigen::MatrixXd secondary) {
  StandardsPair std;
  std.primary.values = std::move(primary);
  std.secondary.values = std::move(secondary);
  return std;
}

}  // namespace

TEST_CASE("direct standardization of identical square standards is the identity") {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(4, 4);
  const TransferMap map = direct_standardization(make_standards(id, id));
  CHECK((map.map - id).norm() <= 1e-12);
  CHECK(map.rank == 4);
}

TEST_CASE("direct standardization matches the hand-computed single-standard case") {
  Eigen::MatrixXd xp(1, 2);
  xp << 2, 0;
  Eigen::MatrixXd xs(1, 2);
  xs << 1, 1;
  const TransferMap map = direct_standardization(make_standards(xp, xs), "a", "b");
  Eigen::MatrixXd expected(2, 2);
  expected << 0.5, 0.5, 0, 0;
  CHECK((map.map - expected).norm() <= 1e-12);
  CHECK((xp * map.map - xs).norm() <= 1e-12);
  CHECK(map.rank == 1);
  CHECK(map.source_label == "a");
  CHECK(map.target_label == "b");
}

TEST_CASE("full-row-rank standards are mapped onto the secondary block exactly") {
  for (unsigned seed : {301u, 302u}) {
    const Eigen::MatrixXd xp = oracle::random_matrix(3, 10, seed);
    const Eigen::MatrixXd xs = oracle::random_matrix(3, 10, seed + 10);
    const TransferMap map = direct_standardization(make_standards(xp, xs));
    CHECK(map.rank == 3);
    CHECK((xp * map.map - xs).norm() <= 1e-8 * xs.norm());
  }
}

TEST_CASE("apply_transfer is the plain matrix action") {
  const Eigen::MatrixXd x = oracle::random_matrix(5, 4, 311);
  SpectraMatrix spectra(x);

  TransferMap identity;
  identity.map = Eigen::MatrixXd::Identity(4, 4);
  CHECK((apply_transfer(identity, spectra).values - x).norm() == doctest::Approx(0.0));

  TransferMap zero;
  zero.map = Eigen::MatrixXd::Zero(4, 4);
  CHECK(apply_transfer(zero, spectra).values.norm() == doctest::Approx(0.0));

  TransferMap random_map;
  random_map.map = oracle::random_matrix(4, 4, 312);
  const SpectraMatrix mapped = apply_transfer(random_map, spectra);
  for (int i = 0; i < 5; ++i) {
    const Eigen::RowVectorXd row = x.row(i) * random_map.map;
    CHECK((mapped.values.row(i) - row).norm() <= 1e-12 * row.norm());
  }
}

TEST_CASE("apply_transfer is linear") {
  TransferMap map;
  map.map = oracle::random_matrix(6, 6, 321);
  const Eigen::MatrixXd x1 = oracle::random_matrix(4, 6, 322);
  const Eigen::MatrixXd x2 = oracle::random_matrix(4, 6, 323);
  const double a = 1.7;
  const double b = -0.4;

  const Eigen::MatrixXd combined =
      apply_transfer(map, SpectraMatrix(a * x1 + b * x2)).values;
  const Eigen::MatrixXd separate = a * apply_transfer(map, SpectraMatrix(x1)).values +
                                   b * apply_transfer(map, SpectraMatrix(x2)).values;
  CHECK((combined - separate).cwiseAbs().maxCoeff() <= 1e-12 * combined.cwiseAbs().maxCoeff());
}

TEST_CASE("apply_transfer rejects a channel mismatch") {
  TransferMap map;
  map.map = Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(apply_transfer(map, SpectraMatrix(Eigen::MatrixXd::Ones(2, 4))), InputError);
}

TEST_CASE("reference NIPALS recovers a rank-one factorization") {
  const Eigen::VectorXd t = oracle::random_vector(10, 331);
  Eigen::VectorXd p = oracle::random_vector(6, 332);
  SpectraMatrix x(t * p.transpose());
  const gctpls::LatentModel model = fit_pls_reference(x, t, 1);

  // The loading direction matches p up to sign and scale.
  Eigen::VectorXd loading = model.components[0].x_loading;
  const double cosine = std::abs(loading.dot(p)) / (loading.norm() * p.norm());
  CHECK(cosine == doctest::Approx(1.0).epsilon(1e-10));

  const ResponseVector fitted = predict(model, x);
  CHECK((fitted - t).norm() <= 1e-8 * t.norm());
}

TEST_CASE("reference NIPALS equals the regularized fit at gamma zero") {
  for (int n_components : {1, 2, 3, 4, 5}) {
    SpectraMatrix x(oracle::random_matrix(20, 12, 341 + n_components));
    ResponseVector y = oracle::random_vector(20, 351 + n_components);
    const StandardsPair std = make_standards(oracle::random_matrix(3, 12, 361),
                                             oracle::random_matrix(3, 12, 362));

    const gctpls::LatentModel reference = fit_pls_reference(x, y, n_components);
    const gctpls::LatentModel regularized =
        gctpls::fit(x, y, std, {0.0, n_components, false});

    SpectraMatrix probe(oracle::random_matrix(8, 12, 371));
    const ResponseVector pred_ref = predict(reference, probe);
    const ResponseVector pred_reg = predict(regularized, probe);
    CHECK((pred_ref - pred_reg).norm() <= 1e-8 * pred_ref.norm());

    // Scores and loadings agree componentwise up to sign.
    for (int a = 0; a < n_components; ++a) {
      const double sign =
          reference.components[a].weights.dot(regularized.components[a].weights) >= 0 ? 1.0
                                                                                      : -1.0;
      CHECK((reference.components[a].weights - sign * regularized.components[a].weights)
                .norm() <= 1e-8);
      CHECK((reference.components[a].scores - sign * regularized.components[a].scores)
                .norm() <= 1e-8 * reference.components[a].scores.norm());
    }
  }
}
