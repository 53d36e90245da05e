#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "pipeline.hpp"
#include "spectral_transfer/errors.hpp"

namespace {

using spectral_transfer::cli::ProtocolOptions;
using spectral_transfer::cli::SynthOptions;

void add_protocol_flags(CLI::App* cmd, ProtocolOptions& options, bool with_method,
                        bool with_gamma_grid) {
  cmd->add_option("--manifest", options.manifest_path, "Dataset manifest (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--response", options.responses,
                  "Response name(s); defaults to every response in the manifest");
  if (with_method) {
    cmd->add_option("--method", options.method, "gct, pls, ds or all")
        ->check(CLI::IsMember({"gct", "pls", "ds", "all"}));
  }
  cmd->add_option("--gamma", options.gamma, "Regularization strength (default 1e6)");
  cmd->add_option("--lv", options.n_lv, "Number of latent variables (default 2)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--standards", options.standards_mode,
                  "external (manifest files) or ks:N (Kennard-Stone pick from the "
                  "calibration set)");
  cmd->add_flag("--center-standards", options.center_standards,
                "Center each standards block by its own mean before fitting");
  cmd->add_option("--cal-size", options.cal_size,
                  "Calibration subset size (default: 3/4 of the samples; 0 = all)");
  cmd->add_option("--out", options.out_dir, "Output directory")->required();
  if (with_gamma_grid) {
    cmd->add_option("--gamma-grid", options.gamma_grid,
                    "Gamma values to sweep (default 0 1e2 1e4 1e6)")
        ->delimiter(',');
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Calibration transfer experiments: graph-regularized PLS, PLS and direct "
               "standardization"};
  app.require_subcommand(1);

  ProtocolOptions eval_options;
  CLI::App* eval = app.add_subcommand(
      "transfer-eval", "Kennard-Stone split, fit, and evaluation on the secondary instrument");
  add_protocol_flags(eval, eval_options, true, false);

  ProtocolOptions sweep_options;
  CLI::App* sweep = app.add_subcommand("sweep", "RMSEP and latent-space alignment across gamma");
  add_protocol_flags(sweep, sweep_options, false, true);

  ProtocolOptions diag_options;
  CLI::App* diagnose =
      app.add_subcommand("diagnose", "Standards residual norms per LV and the transferable-LV flag");
  add_protocol_flags(diagnose, diag_options, false, false);
  diagnose->add_option("--flag-fraction", diag_options.flag_fraction,
                       "Residual fraction that marks exhaustion (default 0.01)");

  ProtocolOptions fit_options;
  std::string model_out;
  CLI::App* fit = app.add_subcommand("fit", "Fit a model and save it as JSON");
  fit->add_option("--manifest", fit_options.manifest_path, "Dataset manifest (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  fit->add_option("--response", fit_options.responses, "Response name");
  fit->add_option("--gamma", fit_options.gamma, "Regularization strength (default 1e6)");
  fit->add_option("--lv", fit_options.n_lv, "Number of latent variables (default 2)")
      ->check(CLI::PositiveNumber);
  fit->add_option("--standards", fit_options.standards_mode, "external or ks:N");
  fit->add_flag("--center-standards", fit_options.center_standards,
                "Center each standards block by its own mean");
  fit->add_option("--cal-size", fit_options.cal_size,
                  "Calibration subset size (default: 3/4 of the samples; 0 = all)");
  fit->add_option("--out", model_out, "Model output path (JSON)")->required();

  std::string predict_model;
  std::string predict_spectra;
  std::string predict_out;
  CLI::App* predict = app.add_subcommand("predict", "Predict responses for a spectra CSV");
  predict->add_option("--model", predict_model, "Model JSON written by 'fit'")
      ->required()
      ->check(CLI::ExistingFile);
  predict->add_option("--spectra", predict_spectra, "Spectra CSV")
      ->required()
      ->check(CLI::ExistingFile);
  predict->add_option("--out", predict_out, "Predictions CSV")->required();

  SynthOptions synth_options;
  CLI::App* synth =
      app.add_subcommand("synth", "Generate a synthetic two-instrument dataset with a manifest");
  synth->add_option("--n", synth_options.n_samples, "Number of samples (default 80)");
  synth->add_option("--channels", synth_options.channels, "Spectral channels (default 160)");
  synth->add_option("--standards", synth_options.n_standards,
                    "Number of transfer standards (default 3)");
  synth->add_option("--shift-offset", synth_options.shift.offset_amplitude,
                    "Additive offset amplitude on the secondary instrument");
  synth->add_option("--shift-gain", synth_options.shift.gain,
                    "Multiplicative gain on the secondary instrument (default 1)");
  synth->add_option("--shift-channels", synth_options.shift.channel_shift,
                    "Wavelength misalignment in channels");
  synth->add_option("--standards-spread", synth_options.shift.standards_intensity_spread,
                    "Intensity spread across the standard replicates (default 0)");
  synth->add_option("--noise", synth_options.noise_level, "Measurement noise (default 0.005)");
  synth->add_option("--seed", synth_options.seed, "RNG seed (default 7)");
  synth->add_option("--primary-label", synth_options.primary_label, "Primary instrument label");
  synth->add_option("--secondary-label", synth_options.secondary_label,
                    "Secondary instrument label");
  synth->add_option("--out", synth_options.out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (eval->parsed()) {
      return spectral_transfer::cli::cmd_transfer_eval(eval_options);
    }
    if (sweep->parsed()) {
      return spectral_transfer::cli::cmd_sweep(sweep_options);
    }
    if (diagnose->parsed()) {
      return spectral_transfer::cli::cmd_diagnose(diag_options);
    }
    if (fit->parsed()) {
      return spectral_transfer::cli::cmd_fit(fit_options, model_out);
    }
    if (predict->parsed()) {
      return spectral_transfer::cli::cmd_predict(predict_model, predict_spectra, predict_out);
    }
    if (synth->parsed()) {
      return spectral_transfer::cli::cmd_synth(synth_options);
    }
  } catch (const spectral_transfer::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const spectral_transfer::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
