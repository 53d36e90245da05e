#include <algorithm>
#include <cctype>
#include <cmath>

#include "spectral_transfer/dataio.hpp"

namespace spectral_transfer::dataio {

namespace {

std::string slugify(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (std::isalnum(static_cast<unsigned char>(ch))) {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    } else if (!out.empty() && out.back() != '-') {
      out += '-';
    }
  }
  while (!out.empty() && out.back() == '-') {
    out.pop_back();
  }
  return out.empty() ? "result" : out;
}

void validate_result(const ExperimentResult& r, size_t index) {
  const std::string where = "result " + std::to_string(index + 1) + " (" + r.scenario() + ", " +
                            r.response_name + ", " + r.method + ")";
  if (r.y_true.size() == 0 || r.y_pred_secondary.size() == 0) {
    throw InputError(where + ": empty predictions");
  }
  if (r.y_true.size() != r.y_pred_secondary.size()) {
    throw InputError(where + ": prediction count does not match validation size");
  }
  if (r.y_pred_primary.size() != 0 && r.y_pred_primary.size() != r.y_true.size()) {
    throw InputError(where + ": primary prediction count does not match validation size");
  }
  if (!(r.rmsep_secondary >= 0.0) || !(r.rmsep_primary >= 0.0)) {
    throw InputError(where + ": negative or non-finite RMSEP");
  }
  auto finite = [&](const Eigen::MatrixXd& m, const char* what) {
    if (m.size() > 0 && !m.allFinite()) {
      throw InputError(where + ": non-finite values in " + what);
    }
  };
  finite(r.y_true, "y_true");
  finite(r.y_pred_secondary, "y_pred_secondary");
  finite(r.y_pred_primary, "y_pred_primary");
  finite(r.calibration_scores, "calibration scores");
  finite(r.primary_std_scores, "standards scores");
  finite(r.secondary_std_scores, "standards scores");
  finite(r.mean_recon_calibration, "reconstructions");
  finite(r.mean_recon_primary_val, "reconstructions");
  finite(r.mean_recon_secondary_val, "reconstructions");
  for (double g : r.std_residual_gaps) {
    if (!std::isfinite(g)) {
      throw InputError(where + ": non-finite residual gap");
    }
  }
}

std::string scores_table(const ExperimentResult& r) {
  const int n_lv = static_cast<int>(std::max<Eigen::Index>(
      {r.calibration_scores.cols(), r.primary_std_scores.cols(), r.secondary_std_scores.cols()}));
  std::string out = "kind,row";
  for (int a = 1; a <= n_lv; ++a) {
    out += ",score_" + std::to_string(a);
  }
  out += '\n';
  auto emit = [&](const char* kind, const Eigen::MatrixXd& scores) {
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
      out += kind;
      out += ',';
      out += std::to_string(i);
      for (Eigen::Index a = 0; a < scores.cols(); ++a) {
        out += ',';
        out += format_double(scores(i, a));
      }
      out += '\n';
    }
  };
  emit("calibration", r.calibration_scores);
  emit("standard_primary", r.primary_std_scores);
  emit("standard_secondary", r.secondary_std_scores);
  return out;
}

std::string reconstructions_table(const ExperimentResult& r) {
  std::string out =
      "wavelength,mean_calibration_reconstruction,mean_primary_validation_reconstruction,"
      "mean_secondary_validation_reconstruction\n";
  const Eigen::Index d = r.mean_recon_calibration.size();
  for (Eigen::Index j = 0; j < d; ++j) {
    const double wl = r.wavelengths.size() == d ? r.wavelengths(j) : static_cast<double>(j);
    out += format_double(wl);
    out += ',';
    out += format_double(r.mean_recon_calibration(j));
    out += ',';
    out += j < r.mean_recon_primary_val.size() ? format_double(r.mean_recon_primary_val(j))
                                               : std::string();
    out += ',';
    out += j < r.mean_recon_secondary_val.size() ? format_double(r.mean_recon_secondary_val(j))
                                                 : std::string();
    out += '\n';
  }
  return out;
}

std::string residuals_table(const ExperimentResult& r) {
  std::string out = "lv,primary_residual_norm,secondary_residual_norm,cross_gap_norm\n";
  for (size_t a = 0; a < r.std_residual_gaps.size(); ++a) {
    out += std::to_string(a);
    out += ',';
    out += a >= 1 && a <= r.primary_std_residual_norms.size()
               ? format_double(r.primary_std_residual_norms[a - 1])
               : std::string();
    out += ',';
    out += a >= 1 && a <= r.secondary_std_residual_norms.size()
               ? format_double(r.secondary_std_residual_norms[a - 1])
               : std::string();
    out += ',';
    out += format_double(r.std_residual_gaps[a]);
    out += '\n';
  }
  return out;
}

std::string predictions_table(const ExperimentResult& r) {
  std::string out = "sample_index,y_measured,y_predicted_secondary,y_predicted_primary\n";
  for (Eigen::Index i = 0; i < r.y_true.size(); ++i) {
    const int index = i < static_cast<Eigen::Index>(r.validation_indices.size())
                          ? r.validation_indices[i]
                          : static_cast<int>(i);
    out += std::to_string(index);
    out += ',';
    out += format_double(r.y_true(i));
    out += ',';
    out += format_double(r.y_pred_secondary(i));
    out += ',';
    out += i < r.y_pred_primary.size() ? format_double(r.y_pred_primary(i)) : std::string();
    out += '\n';
  }
  return out;
}

}  // namespace

std::vector<std::filesystem::path> emit_result_tables(
    const std::vector<ExperimentResult>& results, const std::filesystem::path& out_dir) {
  if (results.empty()) {
    throw InputError("emit_result_tables: no results to write");
  }
  for (size_t i = 0; i < results.size(); ++i) {
    validate_result(results[i], i);
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  }

  std::vector<std::filesystem::path> written;

  std::string summary = "scenario,response,method,gamma,n_lv,rmsep_secondary,rmsep_primary\n";
  for (const ExperimentResult& r : results) {
    summary += r.scenario() + ',' + r.response_name + ',' + r.method + ',' +
               format_double(r.gamma) + ',' + std::to_string(r.n_lv) + ',' +
               format_double(r.rmsep_secondary) + ',' + format_double(r.rmsep_primary) + '\n';
  }
  const std::filesystem::path summary_path = out_dir / "rmsep_summary.csv";
  write_text_atomic(summary_path, summary);
  written.push_back(summary_path);

  for (size_t i = 0; i < results.size(); ++i) {
    const ExperimentResult& r = results[i];
    char prefix[8];
    std::snprintf(prefix, sizeof(prefix), "r%02zu", i + 1);
    const std::string slug = std::string(prefix) + "_" + slugify(r.scenario()) + "_" +
                             slugify(r.response_name) + "_" + slugify(r.method);
    const std::filesystem::path dir = out_dir / slug;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
      throw IoError("cannot create " + dir.string() + ": " + ec.message());
    }
    const struct {
      const char* name;
      std::string content;
    } tables[] = {
        {"scores.csv", scores_table(r)},
        {"reconstructions.csv", reconstructions_table(r)},
        {"residuals.csv", residuals_table(r)},
        {"predictions.csv", predictions_table(r)},
    };
    for (const auto& t : tables) {
      const std::filesystem::path p = dir / t.name;
      write_text_atomic(p, t.content);
      written.push_back(p);
    }
  }
  return written;
}

}  // namespace spectral_transfer::dataio
