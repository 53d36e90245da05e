#include "spectral_transfer/model_io.hpp"

#include <fstream>

#include <json.hpp>

#include "spectral_transfer/dataio.hpp"

namespace spectral_transfer::model_io {

namespace {

constexpr const char* kFormat = "spectral-transfer";
constexpr int kVersion = 1;

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    arr.push_back(v(i));
  }
  return arr;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& arr, const std::string& what) {
  if (!arr.is_array()) {
    throw InputError("model file: '" + what + "' must be an array");
  }
  Eigen::VectorXd v(arr.size());
  Eigen::Index i = 0;
  for (const auto& x : arr) {
    if (!x.is_number()) {
      throw InputError("model file: non-numeric entry in '" + what + "'");
    }
    v(i++) = x.get<double>();
  }
  return v;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(m(i, j));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& rows, const std::string& what) {
  if (!rows.is_array() || rows.empty()) {
    throw InputError("model file: '" + what + "' must be a non-empty array of rows");
  }
  const size_t n_cols = rows[0].size();
  Eigen::MatrixXd m(rows.size(), n_cols);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array() || rows[i].size() != n_cols) {
      throw InputError("model file: ragged rows in '" + what + "'");
    }
    for (size_t j = 0; j < n_cols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j].get<double>();
    }
  }
  return m;
}

nlohmann::json parse_document(const std::string& text, const char* expected_kind) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("model file: ") + e.what());
  }
  if (doc.value("format", std::string()) != kFormat) {
    throw InputError("model file: unknown format tag");
  }
  if (doc.value("version", 0) != kVersion) {
    throw InputError("model file: unsupported version " +
                     std::to_string(doc.value("version", 0)));
  }
  if (doc.value("kind", std::string()) != expected_kind) {
    throw InputError("model file: expected kind '" + std::string(expected_kind) + "', found '" +
                     doc.value("kind", std::string()) + "'");
  }
  return doc;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

std::string model_to_json(const gctpls::LatentModel& model) {
  if (model.components.empty()) {
    throw InputError("model_to_json: model has no components");
  }
  nlohmann::json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  doc["kind"] = "latent_model";
  doc["config"] = {{"gamma", model.config.gamma},
                   {"n_components", model.config.n_components},
                   {"center_standards", model.config.center_standards}};
  doc["centering"] = {{"x_mean", vector_to_json(model.centering.x_mean)},
                      {"y_mean", model.centering.y_mean}};
  // Column a of the weight/loading matrices is component a.
  doc["weights"] = matrix_to_json(model.weight_matrix());
  doc["loadings"] = matrix_to_json(model.loading_matrix());
  doc["regressions"] = vector_to_json(model.regression_vector());
  doc["coefficients"] = vector_to_json(model.coefficients);
  doc["std_residual_gaps"] = model.std_residual_gaps;
  doc["primary_std_residual_norms"] = model.primary_std_residual_norms;
  doc["secondary_std_residual_norms"] = model.secondary_std_residual_norms;
  return doc.dump(2) + "\n";
}

gctpls::LatentModel model_from_json(const std::string& text) {
  const nlohmann::json doc = parse_document(text, "latent_model");

  gctpls::LatentModel model;
  const auto& config = doc.at("config");
  model.config.gamma = config.at("gamma").get<double>();
  model.config.n_components = config.at("n_components").get<int>();
  model.config.center_standards = config.at("center_standards").get<bool>();

  const auto& centering = doc.at("centering");
  model.centering.x_mean = vector_from_json(centering.at("x_mean"), "centering.x_mean");
  model.centering.y_mean = centering.at("y_mean").get<double>();

  const Eigen::MatrixXd weights = matrix_from_json(doc.at("weights"), "weights");
  const Eigen::MatrixXd loadings = matrix_from_json(doc.at("loadings"), "loadings");
  const Eigen::VectorXd regressions = vector_from_json(doc.at("regressions"), "regressions");
  if (weights.cols() != loadings.cols() || weights.cols() != regressions.size()) {
    throw InputError("model file: weights, loadings and regressions disagree on the "
                     "component count");
  }
  if (weights.rows() != loadings.rows() || weights.rows() != model.centering.x_mean.size()) {
    throw InputError("model file: channel counts disagree");
  }
  for (Eigen::Index a = 0; a < weights.cols(); ++a) {
    gctpls::ComponentFit comp;
    comp.weights = weights.col(a);
    comp.x_loading = loadings.col(a);
    comp.regression = regressions(a);
    model.components.push_back(std::move(comp));
  }
  model.coefficients = vector_from_json(doc.at("coefficients"), "coefficients");
  if (model.coefficients.size() != weights.rows()) {
    throw InputError("model file: coefficient length does not match the channel count");
  }
  if (doc.contains("std_residual_gaps")) {
    model.std_residual_gaps = doc["std_residual_gaps"].get<std::vector<double>>();
  }
  if (doc.contains("primary_std_residual_norms")) {
    model.primary_std_residual_norms =
        doc["primary_std_residual_norms"].get<std::vector<double>>();
  }
  if (doc.contains("secondary_std_residual_norms")) {
    model.secondary_std_residual_norms =
        doc["secondary_std_residual_norms"].get<std::vector<double>>();
  }
  return model;
}

void save_model(const std::filesystem::path& path, const gctpls::LatentModel& model) {
  dataio::write_text_atomic(path, model_to_json(model));
}

gctpls::LatentModel load_model(const std::filesystem::path& path) {
  return model_from_json(read_file(path));
}

std::string transfer_map_to_json(const baselines::TransferMap& map) {
  nlohmann::json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  doc["kind"] = "transfer_map";
  doc["source_label"] = map.source_label;
  doc["target_label"] = map.target_label;
  doc["rank"] = map.rank;
  doc["map"] = matrix_to_json(map.map);
  return doc.dump(2) + "\n";
}

baselines::TransferMap transfer_map_from_json(const std::string& text) {
  const nlohmann::json doc = parse_document(text, "transfer_map");
  baselines::TransferMap map;
  map.source_label = doc.value("source_label", std::string());
  map.target_label = doc.value("target_label", std::string());
  map.rank = doc.value("rank", 0);
  map.map = matrix_from_json(doc.at("map"), "map");
  if (map.map.rows() != map.map.cols()) {
    throw InputError("model file: transfer map must be square");
  }
  return map;
}

void save_transfer_map(const std::filesystem::path& path, const baselines::TransferMap& map) {
  dataio::write_text_atomic(path, transfer_map_to_json(map));
}

baselines::TransferMap load_transfer_map(const std::filesystem::path& path) {
  return transfer_map_from_json(read_file(path));
}

}  // namespace spectral_transfer::model_io
