#include "pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "log.hpp"
#include "spectral_transfer/baselines.hpp"
#include "spectral_transfer/model_io.hpp"
#include "spectral_transfer/numcore.hpp"
#include "spectral_transfer/sampling.hpp"

#include <json.hpp>

namespace spectral_transfer::cli {

namespace {

SpectraMatrix take_rows(const SpectraMatrix& source, const std::vector<int>& indices) {
  SpectraMatrix out;
  out.values.resize(static_cast<Eigen::Index>(indices.size()), source.cols());
  for (size_t i = 0; i < indices.size(); ++i) {
    out.values.row(static_cast<Eigen::Index>(i)) = source.values.row(indices[i]);
  }
  out.wavelengths = source.wavelengths;
  return out;
}

ResponseVector take_rows(const ResponseVector& source, const std::vector<int>& indices) {
  ResponseVector out(indices.size());
  for (size_t i = 0; i < indices.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = source(indices[i]);
  }
  return out;
}

std::string method_label(const std::string& method) {
  if (method == "gct") return "GCT-PLS";
  if (method == "pls") return "PLS";
  if (method == "ds") return "DS+PLS";
  throw InputError("unknown method '" + method + "' (expected gct, pls or ds)");
}

std::vector<std::string> expand_methods(const std::string& method) {
  if (method == "all") {
    return {"gct", "pls", "ds"};
  }
  method_label(method);  // validates
  return {method};
}

Eigen::MatrixXd stacked_scores(const std::vector<gctpls::ComponentFit>& components) {
  if (components.empty()) {
    return {};
  }
  Eigen::MatrixXd t(components.front().scores.size(),
                    static_cast<Eigen::Index>(components.size()));
  for (size_t a = 0; a < components.size(); ++a) {
    t.col(static_cast<Eigen::Index>(a)) = components[a].scores;
  }
  return t;
}

}  // namespace

DatasetBundle load_bundle(const std::filesystem::path& manifest_path, bool need_secondary,
                          bool need_external_standards) {
  DatasetBundle bundle;
  bundle.manifest = dataio::load_manifest(manifest_path);
  bundle.primary = dataio::load_spectra_csv(bundle.manifest.file("primary_spectra"));
  log_info("loaded primary spectra " + std::to_string(bundle.primary.rows()) + "x" +
           std::to_string(bundle.primary.cols()));
  if (need_secondary) {
    bundle.secondary = dataio::load_spectra_csv(bundle.manifest.file("secondary_spectra"));
    if (bundle.secondary.rows() != bundle.primary.rows() ||
        bundle.secondary.cols() != bundle.primary.cols()) {
      throw InputError("primary and secondary spectra tables must be paired sample-for-sample");
    }
  }
  bundle.responses = dataio::load_response_csv(bundle.manifest.file("responses"));
  if (bundle.responses.values.rows() != bundle.primary.rows()) {
    throw InputError("response table has " + std::to_string(bundle.responses.values.rows()) +
                     " rows for " + std::to_string(bundle.primary.rows()) + " samples");
  }
  if (bundle.manifest.has("primary_standards") && bundle.manifest.has("secondary_standards")) {
    StandardsPair standards;
    standards.primary = dataio::load_spectra_csv(bundle.manifest.file("primary_standards"));
    standards.secondary = dataio::load_spectra_csv(bundle.manifest.file("secondary_standards"));
    standards.validate();
    bundle.external_standards = std::move(standards);
  } else if (need_external_standards) {
    throw InputError("manifest provides no standards files; use --standards ks:N or add "
                     "primary_standards/secondary_standards");
  }
  return bundle;
}

Scenario prepare_scenario(const DatasetBundle& bundle, const ProtocolOptions& options,
                          const std::string& response_name) {
  Scenario scenario;
  scenario.response_name = response_name;
  const ResponseVector y_all = bundle.responses.column(response_name);

  const int n = static_cast<int>(bundle.primary.rows());
  int cal_size = options.cal_size;
  if (cal_size < 0) {
    cal_size = (3 * n) / 4;
  } else if (cal_size == 0) {
    cal_size = n;
  }
  if (cal_size < 2 || cal_size > n) {
    throw InputError("calibration size " + std::to_string(cal_size) + " is out of range for " +
                     std::to_string(n) + " samples");
  }

  sampling::SplitResult split;
  if (cal_size == n) {
    split.calibration_indices.resize(n);
    for (int i = 0; i < n; ++i) split.calibration_indices[i] = i;
  } else {
    split = sampling::kennard_stone_split(bundle.primary, cal_size);
  }
  log_info("split: " + std::to_string(split.calibration_indices.size()) + " calibration / " +
           std::to_string(split.validation_indices.size()) + " validation samples");

  scenario.x_cal = take_rows(bundle.primary, split.calibration_indices);
  scenario.y_cal = take_rows(y_all, split.calibration_indices);
  scenario.validation_indices = split.validation_indices;
  if (!split.validation_indices.empty()) {
    scenario.x_val_primary = take_rows(bundle.primary, split.validation_indices);
    scenario.y_val = take_rows(y_all, split.validation_indices);
    if (bundle.secondary.rows() > 0) {
      scenario.x_val_secondary = take_rows(bundle.secondary, split.validation_indices);
    }
  }

  if (options.standards_mode == "external") {
    if (!bundle.external_standards) {
      throw InputError("manifest provides no standards files for --standards external");
    }
    scenario.standards = *bundle.external_standards;
  } else if (options.standards_mode.rfind("ks:", 0) == 0) {
    int count = 0;
    try {
      count = std::stoi(options.standards_mode.substr(3));
    } catch (const std::exception&) {
      throw InputError("cannot parse --standards '" + options.standards_mode + "'");
    }
    if (bundle.secondary.rows() == 0) {
      throw InputError("--standards ks:N needs the secondary spectra table");
    }
    const std::vector<int> local = sampling::select_transfer_standards(scenario.x_cal, count);
    std::vector<int> global(local.size());
    for (size_t i = 0; i < local.size(); ++i) {
      global[i] = split.calibration_indices[local[i]];
    }
    scenario.standards.primary = take_rows(bundle.primary, global);
    scenario.standards.secondary = take_rows(bundle.secondary, global);
    log_info("picked " + std::to_string(count) + " transfer standards from the calibration set");
  } else {
    throw InputError("unknown --standards mode '" + options.standards_mode +
                     "' (expected external or ks:N)");
  }
  return scenario;
}

dataio::ExperimentResult run_method(const Scenario& scenario, const DatasetBundle& bundle,
                                    const ProtocolOptions& options, const std::string& method) {
  if (scenario.validation_indices.empty() || scenario.x_val_secondary.rows() == 0) {
    throw InputError("transfer evaluation needs a non-empty validation split on both instruments");
  }

  dataio::ExperimentResult result;
  result.primary_label = bundle.manifest.primary_label;
  result.secondary_label = bundle.manifest.secondary_label;
  result.response_name = scenario.response_name;
  result.method = method_label(method);
  result.n_lv = options.n_lv;
  result.y_true = scenario.y_val;
  result.validation_indices = scenario.validation_indices;
  if (scenario.x_cal.wavelengths) {
    result.wavelengths = *scenario.x_cal.wavelengths;
  }

  if (method == "gct") {
    result.gamma = options.gamma;
    gctpls::FitConfig config{options.gamma, options.n_lv, options.center_standards};
    const gctpls::LatentModel model =
        gctpls::fit(scenario.x_cal, scenario.y_cal, scenario.standards, config);
    result.y_pred_secondary = gctpls::predict(model, scenario.x_val_secondary);
    result.y_pred_primary = gctpls::predict(model, scenario.x_val_primary);

    result.calibration_scores = stacked_scores(model.components);
    result.primary_std_scores = model.primary_std_score_matrix();
    result.secondary_std_scores = model.secondary_std_score_matrix();
    result.mean_recon_calibration =
        gctpls::reconstruct(model, scenario.x_cal, options.n_lv).values.colwise().mean();
    result.mean_recon_primary_val =
        gctpls::reconstruct(model, scenario.x_val_primary, options.n_lv)
            .values.colwise()
            .mean();
    result.mean_recon_secondary_val =
        gctpls::reconstruct(model, scenario.x_val_secondary, options.n_lv)
            .values.colwise()
            .mean();
    result.std_residual_gaps = model.std_residual_gaps;
    result.primary_std_residual_norms = model.primary_std_residual_norms;
    result.secondary_std_residual_norms = model.secondary_std_residual_norms;
  } else if (method == "pls") {
    result.gamma = 0.0;
    const gctpls::LatentModel model =
        baselines::fit_pls_reference(scenario.x_cal, scenario.y_cal, options.n_lv);
    result.y_pred_secondary = gctpls::predict(model, scenario.x_val_secondary);
    result.y_pred_primary = gctpls::predict(model, scenario.x_val_primary);
  } else if (method == "ds") {
    result.gamma = 0.0;
    const baselines::TransferMap map = baselines::direct_standardization(
        scenario.standards, bundle.manifest.primary_label, bundle.manifest.secondary_label);
    const SpectraMatrix x_cal_std = baselines::apply_transfer(map, scenario.x_cal);
    const gctpls::LatentModel model =
        baselines::fit_pls_reference(x_cal_std, scenario.y_cal, options.n_lv);
    result.y_pred_secondary = gctpls::predict(model, scenario.x_val_secondary);
    result.y_pred_primary = gctpls::predict(model, scenario.x_val_primary);
  } else {
    throw InputError("unknown method '" + method + "'");
  }

  result.rmsep_secondary = sampling::rmsep(result.y_true, result.y_pred_secondary);
  result.rmsep_primary = sampling::rmsep(result.y_true, result.y_pred_primary);
  log_info(result.method + " " + scenario.response_name +
           ": rmsep_secondary=" + dataio::format_double(result.rmsep_secondary) +
           " rmsep_primary=" + dataio::format_double(result.rmsep_primary));
  return result;
}

int cmd_transfer_eval(const ProtocolOptions& options) {
  const bool need_external = options.standards_mode == "external";
  const DatasetBundle bundle = load_bundle(options.manifest_path, true, need_external);

  std::vector<std::string> responses =
      options.responses.empty() ? bundle.manifest.response_names : options.responses;
  std::vector<dataio::ExperimentResult> results;
  for (const std::string& response : responses) {
    const Scenario scenario = prepare_scenario(bundle, options, response);
    for (const std::string& method : expand_methods(options.method)) {
      results.push_back(run_method(scenario, bundle, options, method));
    }
  }
  dataio::emit_result_tables(results, options.out_dir);
  for (const dataio::ExperimentResult& r : results) {
    std::cout << r.scenario() << "," << r.response_name << "," << r.method
              << ",rmsep_secondary=" << dataio::format_double(r.rmsep_secondary)
              << ",rmsep_primary=" << dataio::format_double(r.rmsep_primary) << "\n";
  }
  return 0;
}

int cmd_sweep(const ProtocolOptions& options) {
  if (options.gamma_grid.empty()) {
    throw InputError("sweep: gamma grid is empty");
  }
  const bool need_external = options.standards_mode == "external";
  const DatasetBundle bundle = load_bundle(options.manifest_path, true, need_external);
  const std::string response =
      options.responses.empty() ? bundle.manifest.response_names.front() : options.responses[0];
  const Scenario scenario = prepare_scenario(bundle, options, response);

  std::string table =
      "gamma,rmsep_secondary,rmsep_primary,std_score_gap,recon_mean_gap\n";
  for (double gamma : options.gamma_grid) {
    ProtocolOptions point = options;
    point.gamma = gamma;
    const dataio::ExperimentResult r = run_method(scenario, bundle, point, "gct");
    const double score_gap = (r.primary_std_scores - r.secondary_std_scores).norm();
    // Same validation samples through both instrument views: the remaining
    // gap is pure inter-device difference.
    const double recon_gap =
        (r.mean_recon_secondary_val - r.mean_recon_primary_val).norm();
    table += dataio::format_double(gamma) + ',' + dataio::format_double(r.rmsep_secondary) +
             ',' + dataio::format_double(r.rmsep_primary) + ',' +
             dataio::format_double(score_gap) + ',' + dataio::format_double(recon_gap) + '\n';
  }

  std::filesystem::create_directories(options.out_dir);
  const std::filesystem::path path = options.out_dir / "sweep.csv";
  dataio::write_text_atomic(path, table);
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

int cmd_diagnose(const ProtocolOptions& options) {
  const bool need_external = options.standards_mode == "external";
  const DatasetBundle bundle = load_bundle(options.manifest_path, true, need_external);
  const std::string response =
      options.responses.empty() ? bundle.manifest.response_names.front() : options.responses[0];
  const Scenario scenario = prepare_scenario(bundle, options, response);
  const dataio::ExperimentResult r = run_method(scenario, bundle, options, "gct");

  // Smallest LV count after which the cross-instrument residual is below
  // flag_fraction of its initial value; 0 when there is nothing to align.
  const double initial = r.std_residual_gaps.at(0);
  int flagged = -1;
  if (initial <= 1e-12 * std::max(1.0, scenario.standards.primary.values.norm())) {
    flagged = 0;
  } else {
    for (size_t a = 1; a < r.std_residual_gaps.size(); ++a) {
      if (r.std_residual_gaps[a] <= options.flag_fraction * initial) {
        flagged = static_cast<int>(a);
        break;
      }
    }
  }

  std::filesystem::create_directories(options.out_dir);
  std::string table = "lv,primary_residual_norm,secondary_residual_norm,cross_gap_norm\n";
  for (size_t a = 0; a < r.std_residual_gaps.size(); ++a) {
    table += std::to_string(a) + ',';
    table += a >= 1 ? dataio::format_double(r.primary_std_residual_norms[a - 1]) : "";
    table += ',';
    table += a >= 1 ? dataio::format_double(r.secondary_std_residual_norms[a - 1]) : "";
    table += ',';
    table += dataio::format_double(r.std_residual_gaps[a]) + '\n';
  }
  dataio::write_text_atomic(options.out_dir / "residuals.csv", table);

  nlohmann::json doc;
  doc["response"] = response;
  doc["gamma"] = options.gamma;
  doc["n_lv"] = options.n_lv;
  doc["flag_fraction"] = options.flag_fraction;
  doc["initial_gap"] = initial;
  doc["flagged_lv"] = flagged;
  dataio::write_text_atomic(options.out_dir / "diagnose.json", doc.dump(2) + "\n");

  if (flagged < 0) {
    std::cout << "flagged_lv=none (cross-instrument residual never fell below "
              << dataio::format_double(options.flag_fraction * 100.0) << "% of its initial norm)\n";
  } else {
    std::cout << "flagged_lv=" << flagged << "\n";
  }
  return 0;
}

int cmd_fit(const ProtocolOptions& options, const std::filesystem::path& model_out) {
  const bool need_external = options.standards_mode == "external";
  const bool need_secondary = !need_external;
  const DatasetBundle bundle = load_bundle(options.manifest_path, need_secondary, need_external);
  const std::string response =
      options.responses.empty() ? bundle.manifest.response_names.front() : options.responses[0];
  const Scenario scenario = prepare_scenario(bundle, options, response);

  gctpls::FitConfig config{options.gamma, options.n_lv, options.center_standards};
  const gctpls::LatentModel model =
      gctpls::fit(scenario.x_cal, scenario.y_cal, scenario.standards, config);
  model_io::save_model(model_out, model);
  std::cout << "wrote " << model_out.string() << "\n";
  return 0;
}

int cmd_predict(const std::filesystem::path& model_path,
                const std::filesystem::path& spectra_path,
                const std::filesystem::path& out_path) {
  const gctpls::LatentModel model = model_io::load_model(model_path);
  const SpectraMatrix spectra = dataio::load_spectra_csv(spectra_path);
  const ResponseVector predictions = gctpls::predict(model, spectra);

  std::string table = "sample_index,y_predicted\n";
  for (Eigen::Index i = 0; i < predictions.size(); ++i) {
    table += std::to_string(i) + ',' + dataio::format_double(predictions(i)) + '\n';
  }
  dataio::write_text_atomic(out_path, table);
  std::cout << "wrote " << out_path.string() << "\n";
  return 0;
}

int cmd_synth(const SynthOptions& options) {
  const dataio::TwoInstrumentSet set =
      dataio::synth_paired_dataset(options.n_samples, options.channels, options.n_standards,
                                   options.shift, options.noise_level, options.seed);

  std::filesystem::create_directories(options.out_dir);
  dataio::save_spectra_csv(options.out_dir / "primary.csv", set.primary);
  dataio::save_spectra_csv(options.out_dir / "secondary.csv", set.secondary);
  dataio::save_response_csv(options.out_dir / "responses.csv", set.responses);
  dataio::save_spectra_csv(options.out_dir / "standards_primary.csv", set.standards.primary);
  dataio::save_spectra_csv(options.out_dir / "standards_secondary.csv", set.standards.secondary);

  dataio::DatasetManifest manifest;
  manifest.name = options.primary_label + "_" + options.secondary_label + "_synth";
  manifest.primary_label = options.primary_label;
  manifest.secondary_label = options.secondary_label;
  manifest.response_names = set.responses.names;
  manifest.wavelength_start_nm = 1100.0;
  manifest.wavelength_step_nm = 2.0;
  manifest.files["primary_spectra"] = options.out_dir / "primary.csv";
  manifest.files["secondary_spectra"] = options.out_dir / "secondary.csv";
  manifest.files["responses"] = options.out_dir / "responses.csv";
  manifest.files["primary_standards"] = options.out_dir / "standards_primary.csv";
  manifest.files["secondary_standards"] = options.out_dir / "standards_secondary.csv";
  dataio::save_manifest(options.out_dir / "manifest.json", manifest);

  std::cout << "wrote " << (options.out_dir / "manifest.json").string() << "\n";
  return 0;
}

}  // namespace spectral_transfer::cli
