#include "spectral_transfer/graphreg.hpp"

namespace spectral_transfer::graphreg {

GraphMatrices build_graph(int pair_count) {
  if (pair_count < 1) {
    throw InputError("build_graph: pair count must be >= 1, got " + std::to_string(pair_count));
  }
  const Eigen::Index k = pair_count;
  GraphMatrices g;
  g.adjacency = Eigen::MatrixXd::Zero(2 * k, 2 * k);
  for (Eigen::Index i = 0; i < k; ++i) {
    g.adjacency(i, k + i) = 1.0;
    g.adjacency(k + i, i) = 1.0;
  }
  g.degree = Eigen::MatrixXd::Identity(2 * k, 2 * k);
  g.laplacian = g.degree - g.adjacency;
  return g;
}

Eigen::VectorXd RegularizerMatrix::apply(const Eigen::VectorXd& w) const {
  if (w.size() != dim()) {
    throw InputError("regularizer: vector has " + std::to_string(w.size()) +
                     " entries, expected " + std::to_string(dim()));
  }
  if (dense_) {
    return *dense_ * w;
  }
  return factor_.transpose() * (factor_ * w);
}

double RegularizerMatrix::quadratic_form(const Eigen::VectorXd& w) const {
  if (w.size() != dim()) {
    throw InputError("regularizer: vector has " + std::to_string(w.size()) +
                     " entries, expected " + std::to_string(dim()));
  }
  if (dense_) {
    return w.dot(*dense_ * w);
  }
  return (factor_ * w).squaredNorm();
}

Eigen::MatrixXd RegularizerMatrix::dense() const {
  if (dense_) {
    return *dense_;
  }
  return factor_.transpose() * factor_;
}

RegularizerMatrix regularizer(const Eigen::MatrixXd& primary, const Eigen::MatrixXd& secondary,
                              RegularizerStorage storage) {
  if (primary.rows() != secondary.rows() || primary.cols() != secondary.cols()) {
    throw InputError("regularizer: standards shapes differ: " + std::to_string(primary.rows()) +
                     "x" + std::to_string(primary.cols()) + " vs " +
                     std::to_string(secondary.rows()) + "x" + std::to_string(secondary.cols()));
  }
  if (primary.rows() < 1 || primary.cols() < 1) {
    throw InputError("regularizer: standards are empty");
  }

  RegularizerMatrix reg;
  reg.factor_ = primary - secondary;

  const bool dense = storage == RegularizerStorage::kDense ||
                     (storage == RegularizerStorage::kAuto &&
                      primary.cols() <= 4 * primary.rows());
  if (dense) {
    reg.dense_ = reg.factor_.transpose() * reg.factor_;
  }
  return reg;
}

RegularizerMatrix regularizer(const StandardsPair& standards, RegularizerStorage storage) {
  standards.validate();
  return regularizer(standards.primary.values, standards.secondary.values, storage);
}

double regularizer_value(const Eigen::VectorXd& w, const RegularizerMatrix& reg) {
  return reg.quadratic_form(w);
}

}  // namespace spectral_transfer::graphreg
