#include "spectral_transfer/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spectral_transfer::sampling {

std::vector<int> kennard_stone(const SpectraMatrix& spectra, int n_select) {
  spectra.validate();
  const int n = static_cast<int>(spectra.rows());
  if (n_select < 2 || n_select > n) {
    throw InputError("kennard_stone: n_select must be in [2, " + std::to_string(n) +
                     "], got " + std::to_string(n_select));
  }

  const Eigen::MatrixXd& x = spectra.values;
  // Squared distances keep the maximin comparisons exact.
  Eigen::VectorXd sq_norms = x.rowwise().squaredNorm();
  auto sq_dist = [&](int i, int j) {
    const double d = sq_norms(i) + sq_norms(j) - 2.0 * x.row(i).dot(x.row(j));
    return std::max(0.0, d);
  };

  int best_i = 0;
  int best_j = 1;
  double best = -1.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = sq_dist(i, j);
      if (d > best) {
        best = d;
        best_i = i;
        best_j = j;
      }
    }
  }

  std::vector<int> selected = {best_i, best_j};
  std::vector<bool> in_set(n, false);
  in_set[best_i] = in_set[best_j] = true;

  std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());
  for (int i = 0; i < n; ++i) {
    if (!in_set[i]) {
      min_dist[i] = std::min(sq_dist(i, best_i), sq_dist(i, best_j));
    }
  }

  while (static_cast<int>(selected.size()) < n_select) {
    int pick = -1;
    double best_min = -1.0;
    for (int i = 0; i < n; ++i) {
      if (!in_set[i] && min_dist[i] > best_min) {
        best_min = min_dist[i];
        pick = i;
      }
    }
    selected.push_back(pick);
    in_set[pick] = true;
    for (int i = 0; i < n; ++i) {
      if (!in_set[i]) {
        min_dist[i] = std::min(min_dist[i], sq_dist(i, pick));
      }
    }
  }
  return selected;
}

SplitResult kennard_stone_split(const SpectraMatrix& spectra, int n_calibration) {
  std::vector<int> picked = kennard_stone(spectra, n_calibration);
  SplitResult split;
  split.calibration_indices = picked;
  std::sort(split.calibration_indices.begin(), split.calibration_indices.end());
  std::vector<bool> in_cal(spectra.rows(), false);
  for (int i : picked) {
    in_cal[i] = true;
  }
  for (int i = 0; i < static_cast<int>(spectra.rows()); ++i) {
    if (!in_cal[i]) {
      split.validation_indices.push_back(i);
    }
  }
  return split;
}

std::vector<int> select_transfer_standards(const SpectraMatrix& calibration, int n) {
  if (n > calibration.rows()) {
    throw InputError("select_transfer_standards: requested " + std::to_string(n) +
                     " standards from " + std::to_string(calibration.rows()) + " samples");
  }
  return kennard_stone(calibration, n);
}

double rmsep(const ResponseVector& y_true, const ResponseVector& y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw InputError("rmsep: vector lengths differ (" + std::to_string(y_true.size()) + " vs " +
                     std::to_string(y_pred.size()) + ")");
  }
  if (y_true.size() < 1) {
    throw InputError("rmsep: empty vectors");
  }
  return std::sqrt((y_true - y_pred).squaredNorm() / static_cast<double>(y_true.size()));
}

}  // namespace spectral_transfer::sampling
