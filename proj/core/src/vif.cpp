#include "botsentinel/vif.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "botsentinel/error.hpp"

namespace botsentinel {

namespace {

// Relative residual below which a regression is treated as exact.
constexpr double kCollinearTolerance = 1e-12;

}  // namespace

std::vector<double> vif(const Matrix& values) {
  const auto n = static_cast<Eigen::Index>(values.rows());
  const auto d = static_cast<Eigen::Index>(values.cols());
  if (n <= d) {
    throw Error(errc::kInsufficientData, "VIF needs more rows (" + std::to_string(n) +
                                             ") than columns (" + std::to_string(d) + ")");
  }
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> x(
      values.data().data(), n, d);

  std::vector<double> out(static_cast<std::size_t>(d));
  for (Eigen::Index j = 0; j < d; ++j) {
    const Eigen::VectorXd target = x.col(j);
    const double centred_ss = (target.array() - target.mean()).square().sum();
    if (!(centred_ss > 0.0)) {
      throw Error(errc::kInvalidArgument, "VIF undefined for constant column " + std::to_string(j));
    }
    Eigen::MatrixXd design(n, d);
    design.col(0).setOnes();
    for (Eigen::Index c = 0, k = 1; c < d; ++c) {
      if (c != j) design.col(k++) = x.col(c);
    }
    const Eigen::VectorXd beta = design.colPivHouseholderQr().solve(target);
    const double rss = (target - design * beta).squaredNorm();
    const double unexplained = rss / centred_ss;
    out[static_cast<std::size_t>(j)] =
        unexplained <= kCollinearTolerance ? kVifInfinite : 1.0 / std::min(unexplained, 1.0);
  }
  return out;
}

std::map<std::string, double> vif(const FeatureMatrix& matrix) {
  const auto values = vif(matrix.values);
  std::map<std::string, double> out;
  for (std::size_t j = 0; j < values.size(); ++j) out[matrix.feature_names[j]] = values[j];
  return out;
}

VifReport select_by_vif(const FeatureMatrix& matrix, double threshold) {
  VifReport report;
  report.threshold = threshold;

  std::vector<std::size_t> active;
  const Standardization stats = fit_standardization(matrix.values);
  for (std::size_t c = 0; c < matrix.cols(); ++c) {
    if (stats.is_constant(c)) {
      report.constant_features.push_back(matrix.feature_names[c]);
      report.elimination_trace.emplace_back(matrix.feature_names[c], kVifInfinite);
    } else {
      active.push_back(c);
    }
  }

  std::vector<double> current;
  while (!active.empty()) {
    current = vif(matrix.values.select_columns(active));
    std::size_t worst = 0;
    for (std::size_t k = 1; k < current.size(); ++k) {
      if (current[k] > current[worst]) worst = k;
    }
    if (current[worst] < threshold || active.size() == 1) break;
    report.elimination_trace.emplace_back(matrix.feature_names[active[worst]], current[worst]);
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(worst));
  }

  for (std::size_t k = 0; k < active.size(); ++k) {
    const auto& name = matrix.feature_names[active[k]];
    report.retained.push_back(name);
    report.final_vifs[name] = current[k];
    if (current[k] >= threshold) report.unresolvable = true;
  }
  return report;
}

}  // namespace botsentinel
