#pragma once

#include <Eigen/Dense>
#include <string>

#include "spectral_transfer/gctpls.hpp"
#include "spectral_transfer/types.hpp"

namespace spectral_transfer::baselines {

/// Direct-standardization map F = pinv(Xp) Xs with construction metadata.
struct TransferMap {
  Eigen::MatrixXd map;  // d x d
  std::string source_label;
  std::string target_label;
  int rank = 0;  // effective rank of the primary standards used by the pseudo-inverse
};

/// F = pinv(Xp) Xs. When Xp has full row rank, Xp F reproduces Xs.
TransferMap direct_standardization(const StandardsPair& standards,
                                   std::string source_label = {},
                                   std::string target_label = {});

/// X F.
SpectraMatrix apply_transfer(const TransferMap& map, const SpectraMatrix& spectra);

/// Textbook single-response NIPALS (w proportional to X'y per component)
/// with the same deflation, sign and coefficient-aggregation conventions as
/// the regularized fit. Implemented without calling into gctpls so the two
/// remain independent routes to the gamma = 0 model.
gctpls::LatentModel fit_pls_reference(const SpectraMatrix& spectra,
                                      const ResponseVector& response, int n_components);

}  // namespace spectral_transfer::baselines
