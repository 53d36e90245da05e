#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "spectral_transfer/errors.hpp"

namespace spectral_transfer {

/// Reference values for one analyte, one entry per sample.
using ResponseVector = Eigen::VectorXd;

/// Dense spectra table: one row per sample, one column per spectral channel.
/// Wavelengths (nm) and sample identifiers are optional metadata.
struct SpectraMatrix {
  Eigen::MatrixXd values;
  std::optional<Eigen::VectorXd> wavelengths;
  std::optional<std::vector<std::string>> sample_ids;

  SpectraMatrix() = default;
  explicit SpectraMatrix(Eigen::MatrixXd v) : values(std::move(v)) {}

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }

  /// Throws InputError if empty, non-finite, or the metadata does not match
  /// the matrix shape (wavelengths must be strictly increasing).
  void validate() const;
};

/// Column means removed from a calibration set, kept so new spectra can be
/// mapped into the same frame.
struct CenteringInfo {
  Eigen::VectorXd x_mean;
  double y_mean = 0.0;
};

/// Matched calibration standards: row i of `primary` and row i of
/// `secondary` are the same physical sample measured on the two instruments.
struct StandardsPair {
  SpectraMatrix primary;
  SpectraMatrix secondary;

  Eigen::Index pair_count() const { return primary.rows(); }
  Eigen::Index channels() const { return primary.cols(); }

  /// Throws InputError unless both blocks are valid and share the same shape.
  void validate() const;
};

}  // namespace spectral_transfer
