#include "spectral_transfer/gctpls.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <cmath>
#include <functional>

#include "spectral_transfer/numcore.hpp"

namespace spectral_transfer::gctpls {

namespace {

constexpr double kDegenerateResponseTol = 1e-18;
constexpr double kRankTol = 1e-13;

// Flips w so its largest-magnitude entry is positive. Fixes the sign
// ambiguity of the per-component solution.
void fix_sign(Eigen::VectorXd& w) {
  Eigen::Index imax = 0;
  w.cwiseAbs().maxCoeff(&imax);
  if (w(imax) < 0.0) {
    w = -w;
  }
}

}  // namespace

Eigen::Index LatentModel::channels() const {
  return components.empty() ? 0 : components.front().weights.size();
}

Eigen::MatrixXd LatentModel::weight_matrix() const {
  Eigen::MatrixXd w(channels(), n_components());
  for (int a = 0; a < n_components(); ++a) {
    w.col(a) = components[a].weights;
  }
  return w;
}

Eigen::MatrixXd LatentModel::loading_matrix() const {
  Eigen::MatrixXd p(channels(), n_components());
  for (int a = 0; a < n_components(); ++a) {
    p.col(a) = components[a].x_loading;
  }
  return p;
}

Eigen::VectorXd LatentModel::regression_vector() const {
  Eigen::VectorXd c(n_components());
  for (int a = 0; a < n_components(); ++a) {
    c(a) = components[a].regression;
  }
  return c;
}

Eigen::MatrixXd LatentModel::primary_std_score_matrix() const {
  const Eigen::Index k = components.empty() ? 0 : components.front().primary_std_scores.size();
  Eigen::MatrixXd t(k, n_components());
  for (int a = 0; a < n_components(); ++a) {
    t.col(a) = components[a].primary_std_scores;
  }
  return t;
}

Eigen::MatrixXd LatentModel::secondary_std_score_matrix() const {
  const Eigen::Index k = components.empty() ? 0 : components.front().secondary_std_scores.size();
  Eigen::MatrixXd t(k, n_components());
  for (int a = 0; a < n_components(); ++a) {
    t.col(a) = components[a].secondary_std_scores;
  }
  return t;
}

Eigen::VectorXd solve_weights(const Eigen::MatrixXd& x_centered,
                              const Eigen::VectorXd& y_centered,
                              const graphreg::RegularizerMatrix& reg, double gamma,
                              WeightSolvePath path) {
  if (x_centered.rows() != y_centered.size()) {
    throw InputError("solve_weights: X has " + std::to_string(x_centered.rows()) +
                     " rows, y has " + std::to_string(y_centered.size()) + " entries");
  }
  if (!reg.empty() && reg.dim() != x_centered.cols()) {
    throw InputError("solve_weights: regularizer dimension " + std::to_string(reg.dim()) +
                     " does not match " + std::to_string(x_centered.cols()) + " channels");
  }
  if (gamma < 0.0) {
    throw InputError("solve_weights: gamma must be non-negative");
  }

  const double alpha = y_centered.squaredNorm();
  if (!(alpha > kDegenerateResponseTol)) {
    throw NumericalError("solve_weights: centered response is numerically zero, "
                         "the weight system is not defined");
  }

  const Eigen::VectorXd xty = x_centered.transpose() * y_centered;
  if (gamma == 0.0 || reg.empty()) {
    return xty / alpha;
  }

  const Eigen::Index d = x_centered.cols();
  const bool dense = path == WeightSolvePath::kDense ||
                     (path == WeightSolvePath::kAuto && d <= 256);

  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> solve_once;
  Eigen::LLT<Eigen::MatrixXd> llt;
  if (dense) {
    Eigen::MatrixXd system = gamma * reg.dense();
    system.diagonal().array() += alpha;
    llt.compute(system);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("solve_weights: Cholesky factorization of the weight system failed");
    }
    solve_once = [&](const Eigen::VectorXd& b) { return llt.solve(b); };
  } else {
    // Woodbury through the rank-K difference factor:
    // (alpha I + gamma D'D)^{-1} b
    //   = b/alpha - D' [ (I/gamma + D D'/alpha)^{-1} (D b) ] / alpha^2
    const Eigen::MatrixXd& dif = reg.difference_factor();
    Eigen::MatrixXd small = (dif * dif.transpose()) / alpha;
    small.diagonal().array() += 1.0 / gamma;
    llt.compute(small);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("solve_weights: Cholesky factorization of the weight system failed");
    }
    solve_once = [&, &dif = dif](const Eigen::VectorXd& b) -> Eigen::VectorXd {
      const Eigen::VectorXd z = llt.solve(dif * b);
      return b / alpha - (dif.transpose() * z) / (alpha * alpha);
    };
  }

  // One step of iterative refinement; the system condition grows with gamma
  // and a raw solve can lose eight digits at gamma near 1e6.
  Eigen::VectorXd w = solve_once(xty);
  const Eigen::VectorXd residual = xty - alpha * w - gamma * reg.apply(w);
  w += solve_once(residual);
  return w;
}

ObjectiveValue objective_and_gradient(const Eigen::VectorXd& w,
                                      const Eigen::MatrixXd& x_centered,
                                      const Eigen::VectorXd& y_centered,
                                      const graphreg::RegularizerMatrix& reg, double gamma) {
  if (w.size() != x_centered.cols()) {
    throw InputError("objective_and_gradient: w has " + std::to_string(w.size()) +
                     " entries for " + std::to_string(x_centered.cols()) + " channels");
  }
  if (x_centered.rows() != y_centered.size()) {
    throw InputError("objective_and_gradient: X and y row counts differ");
  }

  const double alpha = y_centered.squaredNorm();
  ObjectiveValue out;
  out.value = (x_centered - y_centered * w.transpose()).squaredNorm();
  out.gradient = -x_centered.transpose() * y_centered + alpha * w;
  if (gamma != 0.0 && !reg.empty()) {
    out.value += gamma * reg.quadratic_form(w);
    out.gradient += gamma * reg.apply(w);
  }
  out.gradient *= 2.0;
  return out;
}

LatentModel fit(const SpectraMatrix& spectra, const ResponseVector& response,
                const StandardsPair& standards, const FitConfig& config) {
  spectra.validate();
  standards.validate();
  if (standards.channels() != spectra.cols()) {
    throw InputError("fit: standards have " + std::to_string(standards.channels()) +
                     " channels, calibration data has " + std::to_string(spectra.cols()));
  }
  if (config.gamma < 0.0) {
    throw InputError("fit: gamma must be non-negative");
  }
  const Eigen::Index n = spectra.rows();
  const Eigen::Index d = spectra.cols();
  const int max_components = static_cast<int>(std::min<Eigen::Index>(n - 1, d));
  if (config.n_components < 1 || config.n_components > max_components) {
    throw InputError("fit: n_components must be in [1, " + std::to_string(max_components) +
                     "], got " + std::to_string(config.n_components));
  }

  numcore::CenteredData centered = numcore::mean_center(spectra, response);
  Eigen::MatrixXd x = std::move(centered.spectra.values);
  const Eigen::VectorXd y = std::move(centered.response);

  const double alpha = y.squaredNorm();
  if (!(alpha > kDegenerateResponseTol * std::max(1.0, response.squaredNorm()))) {
    throw NumericalError("fit: response is constant after centering, nothing to model");
  }

  Eigen::MatrixXd xp = standards.primary.values;
  Eigen::MatrixXd xs = standards.secondary.values;
  if (config.center_standards) {
    xp.rowwise() -= xp.colwise().mean();
    xs.rowwise() -= xs.colwise().mean();
  }

  const double x_scale = x.norm();
  const double score_floor = kRankTol * kRankTol * std::max(1.0, x_scale * x_scale);
  // Own-loading deflation of a standards block is exact for any nonzero
  // score, so the guard below only protects against a block whose scores
  // vanish identically.
  constexpr double kStdScoreFloor = 1e-280;

  LatentModel model;
  model.centering = std::move(centered.centering);
  model.config = config;
  model.std_residual_gaps.push_back((xp - xs).norm());

  for (int a = 0; a < config.n_components; ++a) {
    const graphreg::RegularizerMatrix reg = graphreg::regularizer(xp, xs);

    Eigen::VectorXd w = solve_weights(x, y, reg, config.gamma);
    const double w_norm = w.norm();
    if (!(w_norm > 0.0) || !w.allFinite()) {
      throw NumericalError("fit: rank exhausted at component " + std::to_string(a + 1) +
                           ", weight vector vanished");
    }
    w /= w_norm;
    fix_sign(w);

    ComponentFit comp;
    comp.weights = w;
    comp.scores = x * w;
    const double tt = comp.scores.squaredNorm();
    if (!(tt > score_floor)) {
      throw NumericalError("fit: rank exhausted at component " + std::to_string(a + 1) +
                           ", score norm below tolerance");
    }
    comp.regression = comp.scores.dot(y) / tt;
    comp.x_loading = x.transpose() * comp.scores / tt;

    comp.primary_std_scores = xp * w;
    comp.secondary_std_scores = xs * w;
    const double tpt = comp.primary_std_scores.squaredNorm();
    const double tst = comp.secondary_std_scores.squaredNorm();
    comp.primary_std_loading = tpt > kStdScoreFloor
                                   ? Eigen::VectorXd(xp.transpose() * comp.primary_std_scores / tpt)
                                   : Eigen::VectorXd(Eigen::VectorXd::Zero(d));
    comp.secondary_std_loading =
        tst > kStdScoreFloor ? Eigen::VectorXd(xs.transpose() * comp.secondary_std_scores / tst)
                             : Eigen::VectorXd(Eigen::VectorXd::Zero(d));

    x -= comp.scores * comp.x_loading.transpose();
    xp -= comp.primary_std_scores * comp.primary_std_loading.transpose();
    xs -= comp.secondary_std_scores * comp.secondary_std_loading.transpose();

    model.primary_std_residuals.push_back(xp);
    model.secondary_std_residuals.push_back(xs);
    model.std_residual_gaps.push_back((xp - xs).norm());
    model.primary_std_residual_norms.push_back(xp.norm());
    model.secondary_std_residual_norms.push_back(xs.norm());
    model.components.push_back(std::move(comp));
  }

  const Eigen::MatrixXd weights = model.weight_matrix();
  const Eigen::MatrixXd loadings = model.loading_matrix();
  const Eigen::MatrixXd ptw = loadings.transpose() * weights;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(ptw);
  if (!lu.isInvertible()) {
    throw NumericalError("fit: loading-weight system P'W is numerically singular, "
                         "components are collinear");
  }
  model.coefficients = weights * lu.solve(model.regression_vector());
  return model;
}

ResponseVector predict(const LatentModel& model, const SpectraMatrix& spectra) {
  spectra.validate();
  if (spectra.cols() != model.channels()) {
    throw InputError("predict: spectra have " + std::to_string(spectra.cols()) +
                     " channels, model expects " + std::to_string(model.channels()));
  }
  const Eigen::MatrixXd xc = numcore::recenter(spectra.values, model.centering.x_mean);
  return (xc * model.coefficients).array() + model.centering.y_mean;
}

Eigen::MatrixXd project_scores(const LatentModel& model, const Eigen::MatrixXd& values,
                               int n_lv) {
  if (n_lv < 1 || n_lv > model.n_components()) {
    throw InputError("project_scores: n_lv must be in [1, " +
                     std::to_string(model.n_components()) + "], got " + std::to_string(n_lv));
  }
  if (values.cols() != model.channels()) {
    throw InputError("project_scores: channel count mismatch");
  }
  Eigen::MatrixXd x = numcore::recenter(values, model.centering.x_mean);
  Eigen::MatrixXd scores(values.rows(), n_lv);
  for (int a = 0; a < n_lv; ++a) {
    scores.col(a) = x * model.components[a].weights;
    x -= scores.col(a) * model.components[a].x_loading.transpose();
  }
  return scores;
}

SpectraMatrix reconstruct(const LatentModel& model, const SpectraMatrix& spectra, int n_lv) {
  spectra.validate();
  if (spectra.cols() != model.channels()) {
    throw InputError("reconstruct: channel count mismatch");
  }
  const Eigen::MatrixXd scores = project_scores(model, spectra.values, n_lv);

  SpectraMatrix out = spectra;
  out.values.setZero();
  for (int a = 0; a < n_lv; ++a) {
    out.values += scores.col(a) * model.components[a].x_loading.transpose();
  }
  out.values.rowwise() += model.centering.x_mean.transpose();
  return out;
}

StandardsResiduals standards_residuals(const LatentModel& model) {
  if (model.primary_std_residuals.empty() ||
      model.primary_std_residuals.size() != model.components.size()) {
    throw NumericalError("standards_residuals: model carries no standards deflation state "
                         "(was it loaded from disk?)");
  }
  StandardsResiduals out;
  out.primary = model.primary_std_residuals;
  out.secondary = model.secondary_std_residuals;
  out.gap_norms = model.std_residual_gaps;
  return out;
}

}  // namespace spectral_transfer::gctpls
