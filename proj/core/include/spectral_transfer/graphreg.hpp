#pragma once

#include <Eigen/Dense>
#include <optional>

#include "spectral_transfer/types.hpp"

namespace spectral_transfer::graphreg {

/// Adjacency, degree and Laplacian of the matched-standards graph in the
/// block ordering [primary rows; secondary rows]. Row i of the primary block
/// is connected to row i of the secondary block and to nothing else.
struct GraphMatrices {
  Eigen::MatrixXd adjacency;
  Eigen::MatrixXd degree;
  Eigen::MatrixXd laplacian;
};

/// Builds the 2K x 2K graph matrices for K matched pairs.
GraphMatrices build_graph(int pair_count);

enum class RegularizerStorage {
  kAuto,      // factored when channels > 4 * pairs, dense otherwise
  kDense,
  kFactored,
};

/// The quadratic penalty matrix of the matched-standards graph. For the
/// stacked standards K = [Xp; Xs] it equals K^T L K, and identically
/// (Xp - Xs)^T (Xp - Xs), so it is held through the K x d difference factor
/// and only materialized as a dense d x d matrix on demand.
class RegularizerMatrix {
 public:
  RegularizerMatrix() = default;

  Eigen::Index dim() const { return factor_.cols(); }
  Eigen::Index pair_count() const { return factor_.rows(); }
  bool stores_dense() const { return dense_.has_value(); }
  bool empty() const { return factor_.size() == 0; }

  /// The K x d difference Xp - Xs; the penalty matrix is factor^T factor.
  const Eigen::MatrixXd& difference_factor() const { return factor_; }

  /// Gamma * w.
  Eigen::VectorXd apply(const Eigen::VectorXd& w) const;

  /// w^T Gamma w. Always >= 0.
  double quadratic_form(const Eigen::VectorXd& w) const;

  /// Materializes the dense d x d penalty matrix.
  Eigen::MatrixXd dense() const;

 private:
  friend RegularizerMatrix regularizer(const Eigen::MatrixXd&, const Eigen::MatrixXd&,
                                       RegularizerStorage);

  Eigen::MatrixXd factor_;
  std::optional<Eigen::MatrixXd> dense_;
};

/// Builds the regularizer from matched standards.
RegularizerMatrix regularizer(const StandardsPair& standards,
                              RegularizerStorage storage = RegularizerStorage::kAuto);
RegularizerMatrix regularizer(const Eigen::MatrixXd& primary, const Eigen::MatrixXd& secondary,
                              RegularizerStorage storage = RegularizerStorage::kAuto);

/// The penalty value w^T Gamma w.
double regularizer_value(const Eigen::VectorXd& w, const RegularizerMatrix& reg);

}  // namespace spectral_transfer::graphreg
