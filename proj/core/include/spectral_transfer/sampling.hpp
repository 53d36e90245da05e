#pragma once

#include <vector>

#include "spectral_transfer/types.hpp"

namespace spectral_transfer::sampling {

struct SplitResult {
  std::vector<int> calibration_indices;  // ascending
  std::vector<int> validation_indices;   // ascending, complement
};

/// Classical Kennard-Stone maximin selection on Euclidean distances over the
/// raw spectra. Starts from the two most distant samples (lower index
/// first), then repeatedly adds the sample with the largest minimum distance
/// to the selected set. Ties break toward the lowest index; the returned
/// list is in selection order.
std::vector<int> kennard_stone(const SpectraMatrix& spectra, int n_select);

/// Kennard-Stone calibration/validation split; the validation set is the
/// complement of the selected calibration samples.
SplitResult kennard_stone_split(const SpectraMatrix& spectra, int n_calibration);

/// Picks transfer standards from within a calibration set by Kennard-Stone.
/// Returns indices into the given matrix.
std::vector<int> select_transfer_standards(const SpectraMatrix& calibration, int n = 10);

/// sqrt(mean((y_true - y_pred)^2)).
double rmsep(const ResponseVector& y_true, const ResponseVector& y_pred);

}  // namespace spectral_transfer::sampling
