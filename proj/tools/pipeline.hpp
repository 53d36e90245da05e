#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "spectral_transfer/dataio.hpp"
#include "spectral_transfer/gctpls.hpp"
#include "spectral_transfer/types.hpp"

namespace spectral_transfer::cli {

/// Flags shared by the experiment commands.
struct ProtocolOptions {
  std::filesystem::path manifest_path;
  std::vector<std::string> responses;  // empty = all from the manifest
  std::string method = "all";          // gct | pls | ds | all
  double gamma = 1e6;
  int n_lv = 2;
  std::string standards_mode = "external";  // external | ks:N
  bool center_standards = false;
  int cal_size = -1;  // -1: 3/4 of the samples; 0: all samples (fit only)
  std::filesystem::path out_dir;
  std::vector<double> gamma_grid = {0.0, 1e2, 1e4, 1e6};
  double flag_fraction = 0.01;
};

/// Manifest-backed dataset loaded into memory.
struct DatasetBundle {
  dataio::DatasetManifest manifest;
  SpectraMatrix primary;
  SpectraMatrix secondary;  // empty when not required
  dataio::ResponseTable responses;
  std::optional<StandardsPair> external_standards;
};

DatasetBundle load_bundle(const std::filesystem::path& manifest_path, bool need_secondary,
                          bool need_external_standards);

/// One prepared transfer scenario: split, standards, and the matched
/// validation views of both instruments.
struct Scenario {
  SpectraMatrix x_cal;
  ResponseVector y_cal;
  SpectraMatrix x_val_primary;
  SpectraMatrix x_val_secondary;
  ResponseVector y_val;
  StandardsPair standards;
  std::vector<int> validation_indices;
  std::string response_name;
};

Scenario prepare_scenario(const DatasetBundle& bundle, const ProtocolOptions& options,
                          const std::string& response_name);

/// Runs one method ("gct", "pls" or "ds") on a prepared scenario.
dataio::ExperimentResult run_method(const Scenario& scenario, const DatasetBundle& bundle,
                                    const ProtocolOptions& options, const std::string& method);

int cmd_transfer_eval(const ProtocolOptions& options);
int cmd_sweep(const ProtocolOptions& options);
int cmd_diagnose(const ProtocolOptions& options);
int cmd_fit(const ProtocolOptions& options, const std::filesystem::path& model_out);
int cmd_predict(const std::filesystem::path& model_path, const std::filesystem::path& spectra_path,
                const std::filesystem::path& out_path);

struct SynthOptions {
  int n_samples = 80;
  int channels = 160;
  int n_standards = 3;
  dataio::ShiftSpec shift;
  double noise_level = 0.005;
  unsigned seed = 7;
  std::string primary_label = "simA";
  std::string secondary_label = "simB";
  std::filesystem::path out_dir;
};

int cmd_synth(const SynthOptions& options);

}  // namespace spectral_transfer::cli
