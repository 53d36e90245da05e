#include <algorithm>
#include <cmath>
#include <random>

#include "spectral_transfer/dataio.hpp"

namespace spectral_transfer::dataio {

namespace {

Eigen::VectorXd channel_grid(int channels) {
  Eigen::VectorXd x(channels);
  for (int j = 0; j < channels; ++j) {
    x(j) = static_cast<double>(j) / static_cast<double>(channels - 1);
  }
  return x;
}

Eigen::VectorXd bump(const Eigen::VectorXd& x, double center, double width) {
  return (-(x.array() - center).square() / (2.0 * width * width)).exp();
}

// Resamples a spectrum at fractional channel positions j - shift.
Eigen::VectorXd shift_channels(const Eigen::VectorXd& row, double shift) {
  if (shift == 0.0) {
    return row;
  }
  const Eigen::Index d = row.size();
  Eigen::VectorXd out(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    double pos = std::clamp(static_cast<double>(j) - shift, 0.0, static_cast<double>(d - 1));
    const Eigen::Index lo = static_cast<Eigen::Index>(std::floor(pos));
    const Eigen::Index hi = std::min<Eigen::Index>(lo + 1, d - 1);
    const double frac = pos - static_cast<double>(lo);
    out(j) = (1.0 - frac) * row(lo) + frac * row(hi);
  }
  return out;
}

struct Curves {
  Eigen::VectorXd baseline;
  Eigen::VectorXd comp1;
  Eigen::VectorXd comp2;
  Eigen::VectorXd nuisance;
  Eigen::VectorXd glass;
  Eigen::VectorXd offset;  // already scaled by offset_amplitude
};

Curves build_curves(int channels, const ShiftSpec& shift) {
  const Eigen::VectorXd x = channel_grid(channels);
  Curves c;
  c.baseline = 0.9 * bump(x, 0.50, 0.28).array() + 0.15;
  c.comp1 = bump(x, 0.30, 0.055);
  c.comp2 = bump(x, 0.62, 0.075);
  c.nuisance = bump(x, 0.85, 0.045);
  // Glass features sit at different centers than the sample bumps but are
  // broad, as real reference-glass spectra are.
  c.glass = 0.85 * bump(x, 0.45, 0.16) + 0.35 * bump(x, 0.72, 0.10);
  // The offset is broad and overlaps the predictive region.
  c.offset = shift.offset_amplitude * (0.55 * bump(x, 0.36, 0.11).array() + 0.25);
  return c;
}

Eigen::VectorXd to_secondary(const Eigen::VectorXd& clean, const Curves& c,
                             const ShiftSpec& shift) {
  Eigen::VectorXd out = shift_channels(clean, shift.channel_shift);
  out *= shift.gain;
  out += c.offset;
  return out;
}

void validate_params(int n_samples, int channels, int n_standards, const ShiftSpec& shift,
                     double noise_level) {
  if (n_samples < 2) {
    throw InputError("synth: need at least 2 samples, got " + std::to_string(n_samples));
  }
  if (channels < 8) {
    throw InputError("synth: need at least 8 channels, got " + std::to_string(channels));
  }
  if (n_standards < 1) {
    throw InputError("synth: need at least 1 standard, got " + std::to_string(n_standards));
  }
  if (noise_level < 0.0) {
    throw InputError("synth: noise level must be non-negative");
  }
  if (!(shift.gain > 0.0)) {
    throw InputError("synth: gain must be positive");
  }
  if (std::abs(shift.channel_shift) >= channels) {
    throw InputError("synth: channel shift exceeds the axis length");
  }
  if (shift.standards_intensity_spread < 0.0 || shift.standards_intensity_spread >= 1.0) {
    throw InputError("synth: standards intensity spread must be in [0, 1)");
  }
}

Eigen::VectorXd synth_wavelengths(int channels) {
  Eigen::VectorXd wl(channels);
  for (int j = 0; j < channels; ++j) {
    wl(j) = 1100.0 + 2.0 * j;
  }
  return wl;
}

}  // namespace

TwoInstrumentSet synth_paired_dataset(int n_samples, int channels, int n_standards,
                                      const ShiftSpec& shift, double noise_level,
                                      unsigned seed) {
  validate_params(n_samples, channels, n_standards, shift, noise_level);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Curves curves = build_curves(channels, shift);

  TwoInstrumentSet set;
  set.primary.values.resize(n_samples, channels);
  set.secondary.values.resize(n_samples, channels);
  set.responses.names = {"analyte"};
  set.responses.values.resize(n_samples, 1);

  for (int i = 0; i < n_samples; ++i) {
    const double a1 = gauss(rng);
    const double a2 = gauss(rng);
    const double a3 = gauss(rng);
    const Eigen::VectorXd clean =
        curves.baseline + 0.30 * a1 * curves.comp1 + 0.22 * a2 * curves.comp2 +
        0.08 * a3 * curves.nuisance;
    Eigen::VectorXd primary = clean;
    Eigen::VectorXd secondary = to_secondary(clean, curves, shift);
    if (noise_level > 0.0) {
      for (int j = 0; j < channels; ++j) {
        primary(j) += noise_level * gauss(rng);
      }
      for (int j = 0; j < channels; ++j) {
        secondary(j) += noise_level * gauss(rng);
      }
    }
    set.primary.values.row(i) = primary.transpose();
    set.secondary.values.row(i) = secondary.transpose();
    set.responses.values(i, 0) = 1.0 * a1 + 0.6 * a2;
  }

  // Replicate measurements of one glass standard; the intensity spread sets
  // how many independent directions of inter-device structure the standards
  // can express (zero spread keeps every replicate identical).
  set.standards.primary.values.resize(n_standards, channels);
  set.standards.secondary.values.resize(n_standards, channels);
  for (int i = 0; i < n_standards; ++i) {
    double intensity = 1.0;
    if (shift.standards_intensity_spread > 0.0 && n_standards > 1) {
      intensity = 1.0 + shift.standards_intensity_spread *
                            (2.0 * static_cast<double>(i) / (n_standards - 1) - 1.0);
    }
    Eigen::VectorXd std_primary = intensity * curves.glass;
    Eigen::VectorXd std_secondary = to_secondary(std_primary, curves, shift);
    if (noise_level > 0.0) {
      for (int j = 0; j < channels; ++j) {
        std_primary(j) += noise_level * gauss(rng);
      }
      for (int j = 0; j < channels; ++j) {
        std_secondary(j) += noise_level * gauss(rng);
      }
    }
    set.standards.primary.values.row(i) = std_primary.transpose();
    set.standards.secondary.values.row(i) = std_secondary.transpose();
  }

  const Eigen::VectorXd wl = synth_wavelengths(channels);
  set.primary.wavelengths = wl;
  set.secondary.wavelengths = wl;
  set.standards.primary.wavelengths = wl;
  set.standards.secondary.wavelengths = wl;
  return set;
}

SynthDataset synth_two_instrument(int n_samples, int channels, int n_standards,
                                  const ShiftSpec& shift, double noise_level, unsigned seed) {
  const int n_validation = std::max(2, (n_samples + 2) / 3);
  const TwoInstrumentSet full =
      synth_paired_dataset(n_samples + n_validation, channels, n_standards, shift,
                           noise_level, seed);

  SynthDataset out;
  out.primary_calibration.values = full.primary.values.topRows(n_samples);
  out.primary_calibration.wavelengths = full.primary.wavelengths;
  out.calibration_response = full.responses.values.col(0).head(n_samples);

  out.primary_validation.values = full.primary.values.bottomRows(n_validation);
  out.primary_validation.wavelengths = full.primary.wavelengths;
  out.secondary_validation.values = full.secondary.values.bottomRows(n_validation);
  out.secondary_validation.wavelengths = full.secondary.wavelengths;
  out.validation_response = full.responses.values.col(0).tail(n_validation);

  out.standards = full.standards;
  return out;
}

}  // namespace spectral_transfer::dataio
