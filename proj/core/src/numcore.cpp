#include "spectral_transfer/numcore.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>

namespace spectral_transfer::numcore {

CenteredData mean_center(const SpectraMatrix& spectra, const ResponseVector& response) {
  spectra.validate();
  const Eigen::Index n = spectra.rows();
  if (n < 2) {
    throw InputError("mean_center: need at least 2 samples, got " + std::to_string(n));
  }
  if (response.size() != n) {
    throw InputError("mean_center: response length " + std::to_string(response.size()) +
                     " does not match " + std::to_string(n) + " samples");
  }
  if (!response.allFinite()) {
    throw InputError("mean_center: response contains non-finite values");
  }

  CenteredData out;
  out.centering.x_mean = spectra.values.colwise().mean();
  out.centering.y_mean = response.mean();
  out.spectra = spectra;
  out.spectra.values.rowwise() -= out.centering.x_mean.transpose();
  out.response = response.array() - out.centering.y_mean;
  return out;
}

Eigen::MatrixXd recenter(const Eigen::MatrixXd& values, const Eigen::VectorXd& x_mean) {
  if (values.cols() != x_mean.size()) {
    throw InputError("recenter: spectra have " + std::to_string(values.cols()) +
                     " channels, centering has " + std::to_string(x_mean.size()));
  }
  return values.rowwise() - x_mean.transpose();
}

SpectraMatrix recenter(const SpectraMatrix& spectra, const CenteringInfo& info) {
  SpectraMatrix out = spectra;
  out.values = recenter(spectra.values, info.x_mean);
  return out;
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& m, int& effective_rank, double rcond) {
  if (m.rows() < 1 || m.cols() < 1) {
    throw InputError("pseudo_inverse: empty matrix");
  }
  if (!m.allFinite()) {
    throw InputError("pseudo_inverse: matrix contains non-finite values");
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double cutoff = rcond * sigma(0);

  Eigen::VectorXd inv_sigma = Eigen::VectorXd::Zero(sigma.size());
  effective_rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff && sigma(i) > 0.0) {
      inv_sigma(i) = 1.0 / sigma(i);
      ++effective_rank;
    }
  }
  return svd.matrixV() * inv_sigma.asDiagonal() * svd.matrixU().transpose();
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& m, double rcond) {
  int rank = 0;
  return pseudo_inverse(m, rank, rcond);
}

Eigen::VectorXd solve_spd(const Eigen::MatrixXd& s, const Eigen::VectorXd& b) {
  if (s.rows() != s.cols()) {
    throw InputError("solve_spd: matrix is " + std::to_string(s.rows()) + "x" +
                     std::to_string(s.cols()) + ", expected square");
  }
  if (s.rows() != b.size()) {
    throw InputError("solve_spd: dimension mismatch between matrix and right-hand side");
  }
  const double sym_gap = (s - s.transpose()).norm();
  if (sym_gap > 1e-10 * std::max(1e-300, s.norm())) {
    throw InputError("solve_spd: matrix is not symmetric");
  }

  Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("solve_spd: Cholesky factorization failed, matrix is not positive definite");
  }
  return llt.solve(b);
}

}  // namespace spectral_transfer::numcore
