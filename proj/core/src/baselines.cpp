#include "spectral_transfer/baselines.hpp"

#include <Eigen/LU>
#include <cmath>

#include "spectral_transfer/numcore.hpp"

namespace spectral_transfer::baselines {

TransferMap direct_standardization(const StandardsPair& standards, std::string source_label,
                                   std::string target_label) {
  standards.validate();
  TransferMap map;
  map.source_label = std::move(source_label);
  map.target_label = std::move(target_label);
  map.map = numcore::pseudo_inverse(standards.primary.values, map.rank) *
            standards.secondary.values;
  return map;
}

SpectraMatrix apply_transfer(const TransferMap& map, const SpectraMatrix& spectra) {
  spectra.validate();
  if (spectra.cols() != map.map.rows()) {
    throw InputError("apply_transfer: spectra have " + std::to_string(spectra.cols()) +
                     " channels, map expects " + std::to_string(map.map.rows()));
  }
  SpectraMatrix out = spectra;
  out.values = spectra.values * map.map;
  return out;
}

gctpls::LatentModel fit_pls_reference(const SpectraMatrix& spectra,
                                      const ResponseVector& response, int n_components) {
  spectra.validate();
  const Eigen::Index n = spectra.rows();
  const Eigen::Index d = spectra.cols();
  const int max_components = static_cast<int>(std::min<Eigen::Index>(n - 1, d));
  if (n_components < 1 || n_components > max_components) {
    throw InputError("fit_pls_reference: n_components must be in [1, " +
                     std::to_string(max_components) + "], got " + std::to_string(n_components));
  }

  numcore::CenteredData centered = numcore::mean_center(spectra, response);
  Eigen::MatrixXd x = std::move(centered.spectra.values);
  const Eigen::VectorXd y = std::move(centered.response);
  if (!(y.squaredNorm() > 1e-18 * std::max(1.0, response.squaredNorm()))) {
    throw NumericalError("fit_pls_reference: response is constant after centering");
  }

  const double x_scale = x.norm();
  const double score_floor = 1e-26 * std::max(1.0, x_scale * x_scale);

  gctpls::LatentModel model;
  model.centering = std::move(centered.centering);
  model.config.gamma = 0.0;
  model.config.n_components = n_components;
  model.config.center_standards = false;

  for (int a = 0; a < n_components; ++a) {
    Eigen::VectorXd w = x.transpose() * y;
    const double w_norm = w.norm();
    if (!(w_norm > 0.0)) {
      throw NumericalError("fit_pls_reference: rank exhausted at component " +
                           std::to_string(a + 1));
    }
    w /= w_norm;
    Eigen::Index imax = 0;
    w.cwiseAbs().maxCoeff(&imax);
    if (w(imax) < 0.0) {
      w = -w;
    }

    gctpls::ComponentFit comp;
    comp.weights = w;
    comp.scores = x * w;
    const double tt = comp.scores.squaredNorm();
    if (!(tt > score_floor)) {
      throw NumericalError("fit_pls_reference: rank exhausted at component " +
                           std::to_string(a + 1) + ", score norm below tolerance");
    }
    comp.regression = comp.scores.dot(y) / tt;
    comp.x_loading = x.transpose() * comp.scores / tt;
    x -= comp.scores * comp.x_loading.transpose();
    model.components.push_back(std::move(comp));
  }

  const Eigen::MatrixXd weights = model.weight_matrix();
  const Eigen::MatrixXd loadings = model.loading_matrix();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(loadings.transpose() * weights);
  if (!lu.isInvertible()) {
    throw NumericalError("fit_pls_reference: loading-weight system P'W is numerically singular");
  }
  model.coefficients = weights * lu.solve(model.regression_vector());
  return model;
}

}  // namespace spectral_transfer::baselines
