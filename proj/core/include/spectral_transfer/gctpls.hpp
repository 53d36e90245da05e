#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spectral_transfer/graphreg.hpp"
#include "spectral_transfer/types.hpp"

namespace spectral_transfer::gctpls {

struct FitConfig {
  double gamma = 1e6;
  int n_components = 2;
  bool center_standards = false;
};

/// One latent variable: weight, scores and loadings for the calibration data
/// and for both standards blocks, plus the per-component regression scalar.
struct ComponentFit {
  Eigen::VectorXd weights;                // w, unit norm
  Eigen::VectorXd scores;                 // t, from the deflated X at extraction
  Eigen::VectorXd x_loading;              // p
  Eigen::VectorXd primary_std_scores;     // t_p
  Eigen::VectorXd secondary_std_scores;   // t_s
  Eigen::VectorXd primary_std_loading;    // p_p
  Eigen::VectorXd secondary_std_loading;  // p_s
  double regression = 0.0;                // c = t'y / t't
};

struct LatentModel {
  std::vector<ComponentFit> components;
  Eigen::VectorXd coefficients;  // b = W (P'W)^{-1} c
  CenteringInfo centering;
  FitConfig config;

  // Deflation state of the standards after each component. The matrices are
  // kept in memory only; serialization stores just the norms.
  std::vector<Eigen::MatrixXd> primary_std_residuals;
  std::vector<Eigen::MatrixXd> secondary_std_residuals;
  // ||Xp_res - Xs_res||_F, entry 0 before any deflation, entry a after
  // component a. Size n_components + 1.
  std::vector<double> std_residual_gaps;
  // ||Xp_res||_F and ||Xs_res||_F after each component. Size n_components.
  std::vector<double> primary_std_residual_norms;
  std::vector<double> secondary_std_residual_norms;

  int n_components() const { return static_cast<int>(components.size()); }
  Eigen::Index channels() const;

  Eigen::MatrixXd weight_matrix() const;           // d x A
  Eigen::MatrixXd loading_matrix() const;          // d x A
  Eigen::VectorXd regression_vector() const;       // A
  Eigen::MatrixXd primary_std_score_matrix() const;    // K x A
  Eigen::MatrixXd secondary_std_score_matrix() const;  // K x A
};

enum class WeightSolvePath {
  kAuto,      // dense up to 256 channels, Woodbury above
  kDense,
  kWoodbury,
};

/// Solves (y'y I + gamma Gamma) w = X'y for the unnormalized weight vector.
/// X and y must already be centered.
Eigen::VectorXd solve_weights(const Eigen::MatrixXd& x_centered,
                              const Eigen::VectorXd& y_centered,
                              const graphreg::RegularizerMatrix& reg, double gamma,
                              WeightSolvePath path = WeightSolvePath::kAuto);

struct ObjectiveValue {
  double value = 0.0;
  Eigen::VectorXd gradient;
};

/// Evaluates ||X - y w'||_F^2 + gamma w' Gamma w and its gradient
/// 2 (-X'y + (y'y) w + gamma Gamma w).
ObjectiveValue objective_and_gradient(const Eigen::VectorXd& w,
                                      const Eigen::MatrixXd& x_centered,
                                      const Eigen::VectorXd& y_centered,
                                      const graphreg::RegularizerMatrix& reg, double gamma);

/// Fits the graph-regularized latent-variable model: centers the calibration
/// data once, then per component rebuilds the penalty from the deflated
/// standards, solves for the weight, extracts scores and loadings, and
/// deflates X and both standards blocks with their own loadings. The
/// response is never deflated. Aggregated coefficients close the fit.
LatentModel fit(const SpectraMatrix& spectra, const ResponseVector& response,
                const StandardsPair& standards, const FitConfig& config);

/// y_hat = (X_new - x_mean) b + y_mean.
ResponseVector predict(const LatentModel& model, const SpectraMatrix& spectra);

/// Scores of new spectra through the first n_lv components, computed by the
/// same running deflation used during fitting (equivalent to
/// X_c W (P'W)^{-1} on the leading columns).
Eigen::MatrixXd project_scores(const LatentModel& model, const Eigen::MatrixXd& values,
                               int n_lv);

/// Rank-n_lv reconstruction: sum of score-loading outer products plus the
/// calibration mean. With n_lv = A on the training set this reproduces the
/// data minus the final deflation residual exactly.
SpectraMatrix reconstruct(const LatentModel& model, const SpectraMatrix& spectra, int n_lv);

struct StandardsResiduals {
  std::vector<Eigen::MatrixXd> primary;    // after each component
  std::vector<Eigen::MatrixXd> secondary;
  std::vector<double> gap_norms;           // size A + 1, entry 0 = before deflation
};

/// Deflation residuals of the standards after each component; the gap norms
/// drive the transferable-LV diagnostic. Requires a freshly fitted model.
StandardsResiduals standards_residuals(const LatentModel& model);

}  // namespace spectral_transfer::gctpls
