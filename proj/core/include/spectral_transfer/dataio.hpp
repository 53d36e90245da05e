#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "spectral_transfer/types.hpp"

namespace spectral_transfer::dataio {

// ---------------------------------------------------------------------------
// CSV spectra tables
// ---------------------------------------------------------------------------

/// Loads a rectangular numeric CSV: rows are samples, columns are channels.
/// The first row is consumed as the wavelength axis when its first cell is
/// non-numeric, or when the whole row is numeric, strictly increasing, and
/// every value exceeds the magnitude of every data value below it (a
/// wavelength axis in nm dwarfs absorbance values). Otherwise all rows are
/// data. Accepts '\n' or '\r\n' line endings.
SpectraMatrix load_spectra_csv(const std::filesystem::path& path);

/// Writes the matrix with shortest round-trip number formatting; a
/// wavelength header row is emitted when the axis is present.
void save_spectra_csv(const std::filesystem::path& path, const SpectraMatrix& spectra);

/// Named response columns, one row per sample. The header row is required.
struct ResponseTable {
  std::vector<std::string> names;
  Eigen::MatrixXd values;  // N x n_responses

  ResponseVector column(const std::string& name) const;
  bool has(const std::string& name) const;
};

ResponseTable load_response_csv(const std::filesystem::path& path);
void save_response_csv(const std::filesystem::path& path, const ResponseTable& table);

// ---------------------------------------------------------------------------
// Dataset manifests
// ---------------------------------------------------------------------------

/// Versioned JSON document naming the files of a two-instrument dataset.
/// Recognized roles: primary_spectra, secondary_spectra, responses,
/// primary_standards, secondary_standards. Paths resolve relative to the
/// manifest location.
struct DatasetManifest {
  static constexpr int kVersion = 1;

  std::string name;
  std::string primary_label = "primary";
  std::string secondary_label = "secondary";
  std::map<std::string, std::filesystem::path> files;  // role -> resolved path
  std::vector<std::string> response_names;
  double wavelength_start_nm = 0.0;
  double wavelength_step_nm = 0.0;

  bool has(const std::string& role) const { return files.count(role) > 0; }
  const std::filesystem::path& file(const std::string& role) const;
};

DatasetManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

// ---------------------------------------------------------------------------
// Synthetic two-instrument data
// ---------------------------------------------------------------------------

/// Inter-device perturbation applied to every secondary-instrument spectrum:
/// optional wavelength misalignment (in channels, via linear interpolation),
/// then a multiplicative gain, then an additive broad offset spectrum.
/// standards_intensity_spread controls how much the replicate standards
/// differ in intensity; zero keeps them identical, which together with an
/// offset-only shift confines the inter-device structure to one direction.
struct ShiftSpec {
  double offset_amplitude = 0.0;
  double gain = 1.0;
  double channel_shift = 0.0;
  double standards_intensity_spread = 0.0;

  bool any() const { return offset_amplitude != 0.0 || gain != 1.0 || channel_shift != 0.0; }
};

/// Desk-scale split dataset: calibration from the primary instrument,
/// matched standards, and validation samples seen by both instruments.
struct SynthDataset {
  SpectraMatrix primary_calibration;
  ResponseVector calibration_response;
  StandardsPair standards;
  SpectraMatrix primary_validation;
  SpectraMatrix secondary_validation;
  ResponseVector validation_response;
};

/// Full paired corpus: every sample measured on both instruments, for
/// writing manifest-backed datasets.
struct TwoInstrumentSet {
  SpectraMatrix primary;
  SpectraMatrix secondary;
  ResponseTable responses;  // single column named "analyte"
  StandardsPair standards;
};

/// Smooth Gaussian-bump spectra with the response linear in two latent
/// directions; the standards carry features disjoint from the samples'.
/// The same seed always produces the same bytes.
SynthDataset synth_two_instrument(int n_samples, int channels, int n_standards,
                                  const ShiftSpec& shift, double noise_level, unsigned seed);

TwoInstrumentSet synth_paired_dataset(int n_samples, int channels, int n_standards,
                                      const ShiftSpec& shift, double noise_level, unsigned seed);

// ---------------------------------------------------------------------------
// Result emission
// ---------------------------------------------------------------------------

/// One transfer experiment: scenario, method, error metrics and the
/// plot-ready diagnostics behind them.
struct ExperimentResult {
  std::string primary_label;
  std::string secondary_label;
  std::string response_name;
  std::string method;  // "GCT-PLS" | "PLS" | "DS+PLS"
  double gamma = 0.0;
  int n_lv = 0;
  double rmsep_secondary = 0.0;
  double rmsep_primary = 0.0;

  Eigen::VectorXd y_true;                // validation references
  Eigen::VectorXd y_pred_secondary;      // predictions on secondary validation spectra
  Eigen::VectorXd y_pred_primary;        // predictions on primary validation spectra
  std::vector<int> validation_indices;   // into the source dataset

  // Diagnostics (populated for GCT-PLS rows).
  Eigen::MatrixXd calibration_scores;        // N_cal x A
  Eigen::MatrixXd primary_std_scores;        // K x A
  Eigen::MatrixXd secondary_std_scores;      // K x A
  Eigen::VectorXd wavelengths;               // d (empty when unknown)
  Eigen::VectorXd mean_recon_calibration;    // d
  Eigen::VectorXd mean_recon_primary_val;    // d, same samples as the secondary view
  Eigen::VectorXd mean_recon_secondary_val;  // d
  std::vector<double> std_residual_gaps;     // per LV, entry 0 = initial
  std::vector<double> primary_std_residual_norms;
  std::vector<double> secondary_std_residual_norms;

  std::string scenario() const { return primary_label + "->" + secondary_label; }
};

/// Writes rmsep_summary.csv plus, per result, a subdirectory with
/// scores.csv, reconstructions.csv, residuals.csv and predictions.csv.
/// All results are validated before anything is written; files are written
/// atomically (temp + rename). Returns the paths written.
std::vector<std::filesystem::path> emit_result_tables(
    const std::vector<ExperimentResult>& results, const std::filesystem::path& out_dir);

/// Shortest round-trip decimal formatting used by every emitted table.
std::string format_double(double value);

/// Writes content to a sibling temp file and renames it into place.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace spectral_transfer::dataio
