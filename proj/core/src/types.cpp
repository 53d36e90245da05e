#include "spectral_transfer/types.hpp"

namespace spectral_transfer {

void SpectraMatrix::validate() const {
  if (values.rows() < 1 || values.cols() < 1) {
    throw InputError("spectra matrix is empty (" + std::to_string(values.rows()) + "x" +
                     std::to_string(values.cols()) + ")");
  }
  if (!values.allFinite()) {
    throw InputError("spectra matrix contains non-finite values");
  }
  if (wavelengths) {
    if (wavelengths->size() != values.cols()) {
      throw InputError("wavelength axis has " + std::to_string(wavelengths->size()) +
                       " entries for " + std::to_string(values.cols()) + " channels");
    }
    for (Eigen::Index j = 1; j < wavelengths->size(); ++j) {
      if (!((*wavelengths)[j] > (*wavelengths)[j - 1])) {
        throw InputError("wavelength axis is not strictly increasing at index " +
                         std::to_string(j));
      }
    }
  }
  if (sample_ids && static_cast<Eigen::Index>(sample_ids->size()) != values.rows()) {
    throw InputError("sample id list has " + std::to_string(sample_ids->size()) +
                     " entries for " + std::to_string(values.rows()) + " rows");
  }
}

void StandardsPair::validate() const {
  primary.validate();
  secondary.validate();
  if (primary.rows() != secondary.rows() || primary.cols() != secondary.cols()) {
    throw InputError("standards pair shapes differ: " + std::to_string(primary.rows()) + "x" +
                     std::to_string(primary.cols()) + " vs " + std::to_string(secondary.rows()) +
                     "x" + std::to_string(secondary.cols()));
  }
}

}  // namespace spectral_transfer
