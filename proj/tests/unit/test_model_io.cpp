#include <doctest.h>

#include <filesystem>

#include "oracles.hpp"
#include "spectral_transfer/baselines.hpp"
#include "spectral_transfer/model_io.hpp"

using namespace spectral_transfer;

namespace {

gctpls::LatentModel fitted_model() {
  SpectraMatrix x(oracle::random_matrix(12, 7, 701));
  ResponseVector y = oracle::random_vector(12, 702);
  StandardsPair std;
  std.primary.values = oracle::random_matrix(3, 7, 703);
  std.secondary.values = oracle::random_matrix(3, 7, 704);
  return gctpls::fit(x, y, std, {250.0, 3, false});
}

std::filesystem::path temp_file(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "spectral_transfer_model_io";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("a model survives the JSON round trip bit-exactly") {
  const gctpls::LatentModel model = fitted_model();
  const gctpls::LatentModel back = model_io::model_from_json(model_io::model_to_json(model));

  CHECK(back.config.gamma == model.config.gamma);
  CHECK(back.config.n_components == model.config.n_components);
  CHECK(back.config.center_standards == model.config.center_standards);
  CHECK(back.centering.y_mean == model.centering.y_mean);
  CHECK((back.centering.x_mean - model.centering.x_mean).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.coefficients - model.coefficients).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(back.n_components() == model.n_components());
  for (int a = 0; a < model.n_components(); ++a) {
    CHECK((back.components[a].weights - model.components[a].weights).cwiseAbs().maxCoeff() ==
          0.0);
    CHECK((back.components[a].x_loading - model.components[a].x_loading)
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK(back.components[a].regression == model.components[a].regression);
  }
  REQUIRE(back.std_residual_gaps.size() == model.std_residual_gaps.size());
  for (size_t i = 0; i < model.std_residual_gaps.size(); ++i) {
    CHECK(back.std_residual_gaps[i] == model.std_residual_gaps[i]);
  }
}

TEST_CASE("a loaded model predicts and reconstructs like the original") {
  const gctpls::LatentModel model = fitted_model();
  const auto path = temp_file("model.json");
  model_io::save_model(path, model);
  const gctpls::LatentModel loaded = model_io::load_model(path);

  SpectraMatrix probe(oracle::random_matrix(5, 7, 711));
  CHECK((gctpls::predict(loaded, probe) - gctpls::predict(model, probe)).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK((gctpls::reconstruct(loaded, probe, 2).values -
         gctpls::reconstruct(model, probe, 2).values)
            .cwiseAbs()
            .maxCoeff() == 0.0);

  // The deflation matrices are not persisted.
  CHECK_THROWS_AS(gctpls::standards_residuals(loaded), NumericalError);
}

TEST_CASE("model files with a wrong version or kind are rejected") {
  const gctpls::LatentModel model = fitted_model();
  std::string text = model_io::model_to_json(model);

  std::string wrong_version = text;
  wrong_version.replace(wrong_version.find("\"version\": 1"), 12, "\"version\": 9");
  CHECK_THROWS_AS(model_io::model_from_json(wrong_version), InputError);

  CHECK_THROWS_AS(model_io::transfer_map_from_json(text), InputError);
  CHECK_THROWS_AS(model_io::model_from_json("{not json"), InputError);
}

TEST_CASE("a transfer map survives the JSON round trip bit-exactly") {
  StandardsPair std;
  std.primary.values = oracle::random_matrix(3, 6, 721);
  std.secondary.values = oracle::random_matrix(3, 6, 722);
  const baselines::TransferMap map = baselines::direct_standardization(std, "m5", "mp6");

  const auto path = temp_file("map.json");
  model_io::save_transfer_map(path, map);
  const baselines::TransferMap back = model_io::load_transfer_map(path);
  CHECK(back.source_label == "m5");
  CHECK(back.target_label == "mp6");
  CHECK(back.rank == map.rank);
  CHECK((back.map - map.map).cwiseAbs().maxCoeff() == 0.0);
}
