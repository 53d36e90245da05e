#pragma once

#include <Eigen/Dense>

#include "spectral_transfer/types.hpp"

namespace spectral_transfer::numcore {

struct CenteredData {
  SpectraMatrix spectra;
  ResponseVector response;
  CenteringInfo centering;
};

/// Removes the column means of the spectra and the mean of the response.
/// Requires at least two samples.
CenteredData mean_center(const SpectraMatrix& spectra, const ResponseVector& response);

/// Subtracts a previously computed column mean from every row. No rescaling.
SpectraMatrix recenter(const SpectraMatrix& spectra, const CenteringInfo& info);
Eigen::MatrixXd recenter(const Eigen::MatrixXd& values, const Eigen::VectorXd& x_mean);

/// Moore-Penrose pseudo-inverse via SVD. Singular values below
/// rcond * sigma_max are truncated to zero.
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& m, double rcond = 1e-10);

/// Same, also reporting the number of singular values kept.
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& m, int& effective_rank,
                               double rcond = 1e-10);

/// Solves S x = b for symmetric positive-definite S by Cholesky
/// factorization. Throws NumericalError when the factorization fails.
Eigen::VectorXd solve_spd(const Eigen::MatrixXd& s, const Eigen::VectorXd& b);

}  // namespace spectral_transfer::numcore
