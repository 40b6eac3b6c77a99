#include "botsentinel/feature_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "botsentinel/csv.hpp"
#include "botsentinel/error.hpp"

namespace botsentinel {

const std::array<std::string_view, kFeatureCount>& canonical_feature_names() {
  static constexpr std::array<std::string_view, kFeatureCount> names{
      "periodicity",     "loglik",           "sumsq_ar",        "error_var",
      "fit_length",      "n_local_maxima",   "secondary_power_ratio",
      "lexical_diversity", "mean_words",     "var_words",
      "hashtag_freq",    "rho1",             "rho2",            "rho3",
      "rho4",            "rho5",             "sent_afinn_slot", "sent_bing_slot",
      "sent_nrc_slot"};
  return names;
}

std::optional<std::size_t> FeatureMatrix::column_index(std::string_view name) const {
  auto it = std::find(feature_names.begin(), feature_names.end(), name);
  if (it == feature_names.end()) return std::nullopt;
  return static_cast<std::size_t>(it - feature_names.begin());
}

std::array<double, kFeatureCount> feature_row(const TemporalFeatures& t, const SemanticFeatures& s) {
  return {t.periodicity,
          t.loglik,
          t.sumsq_ar,
          t.error_var,
          static_cast<double>(t.fit_length),
          static_cast<double>(t.n_local_maxima),
          t.secondary_power_ratio,
          s.lexical_diversity,
          s.mean_words,
          s.var_words,
          s.hashtag_freq,
          s.rho[0],
          s.rho[1],
          s.rho[2],
          s.rho[3],
          s.rho[4],
          s.sentiment[0],
          s.sentiment[1],
          s.sentiment[2]};
}

FeatureMatrix assemble_matrix(const std::map<std::string, TemporalFeatures>& temporal,
                              const std::map<std::string, SemanticFeatures>& semantic,
                              const std::map<std::string, std::optional<Label>>& labels) {
  std::vector<std::string> only_temporal;
  std::vector<std::string> only_semantic;
  for (const auto& [id, _] : temporal) {
    if (!semantic.contains(id)) only_temporal.push_back(id);
  }
  for (const auto& [id, _] : semantic) {
    if (!temporal.contains(id)) only_semantic.push_back(id);
  }
  if (!only_temporal.empty() || !only_semantic.empty()) {
    std::string msg = "temporal and semantic feature sets differ;";
    for (const auto& id : only_temporal) msg += " temporal-only:" + id;
    for (const auto& id : only_semantic) msg += " semantic-only:" + id;
    throw Error(errc::kInvalidArgument, msg);
  }

  FeatureMatrix fm;
  const auto& names = canonical_feature_names();
  fm.feature_names.assign(names.begin(), names.end());
  fm.values = Matrix(0, kFeatureCount);
  for (const auto& [id, t] : temporal) {
    const auto row = feature_row(t, semantic.at(id));
    for (double v : row) {
      if (!std::isfinite(v)) throw Error(errc::kInvalidArgument, "non-finite feature for user '" + id + "'");
    }
    fm.user_ids.push_back(id);
    fm.values.append_row(row);
    auto lab = labels.find(id);
    fm.labels.push_back(lab == labels.end() ? std::nullopt : lab->second);
  }
  return fm;
}

Standardization fit_standardization(const Matrix& values) {
  const std::size_t n = values.rows();
  const std::size_t d = values.cols();
  Standardization s;
  s.mean.assign(d, 0.0);
  s.sd.assign(d, 0.0);
  if (n == 0) return s;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) s.mean[c] += values(r, c);
  }
  for (double& m : s.mean) m /= static_cast<double>(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      const double diff = values(r, c) - s.mean[c];
      s.sd[c] += diff * diff;
    }
  }
  for (std::size_t c = 0; c < d; ++c) {
    s.sd[c] = std::sqrt(s.sd[c] / static_cast<double>(n));
    // Values that only differ by rounding noise count as constant.
    if (s.sd[c] <= 1e-12 * std::max(1.0, std::abs(s.mean[c]))) s.sd[c] = 0.0;
  }
  return s;
}

Matrix apply_standardization(const Matrix& values, const Standardization& stats) {
  if (values.cols() != stats.mean.size()) {
    throw Error(errc::kDimensionMismatch, "standardization statistics do not match column count");
  }
  Matrix out(values.rows(), values.cols());
  for (std::size_t r = 0; r < values.rows(); ++r) {
    for (std::size_t c = 0; c < values.cols(); ++c) {
      out(r, c) = stats.sd[c] == 0.0 ? 0.0 : (values(r, c) - stats.mean[c]) / stats.sd[c];
    }
  }
  return out;
}

FeatureMatrix standardize(const FeatureMatrix& matrix) {
  if (matrix.rows() < 2) throw Error(errc::kInsufficientData, "standardization needs at least 2 rows");
  return standardize_with(matrix, fit_standardization(matrix.values));
}

FeatureMatrix standardize_with(const FeatureMatrix& matrix, const Standardization& stats) {
  FeatureMatrix out = matrix;
  out.values = apply_standardization(matrix.values, stats);
  out.standardization = stats;
  return out;
}

FeatureMatrix select_users(const FeatureMatrix& matrix, std::span<const std::string> user_ids) {
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < matrix.user_ids.size(); ++i) index.emplace(matrix.user_ids[i], i);
  std::vector<std::size_t> rows;
  rows.reserve(user_ids.size());
  for (const auto& id : user_ids) {
    auto it = index.find(id);
    if (it == index.end()) throw Error(errc::kInvalidArgument, "unknown user_id '" + id + "'");
    rows.push_back(it->second);
  }
  FeatureMatrix out;
  out.feature_names = matrix.feature_names;
  out.values = matrix.values.select_rows(rows);
  out.standardization = matrix.standardization;
  for (std::size_t r : rows) {
    out.user_ids.push_back(matrix.user_ids[r]);
    out.labels.push_back(matrix.labels[r]);
  }
  return out;
}

FeatureMatrix select_features(const FeatureMatrix& matrix, std::span<const std::string> names) {
  std::vector<std::size_t> cols;
  for (const auto& name : names) {
    auto idx = matrix.column_index(name);
    if (!idx) throw Error(errc::kFeatureMismatch, "feature '" + name + "' not present");
    cols.push_back(*idx);
  }
  FeatureMatrix out;
  out.user_ids = matrix.user_ids;
  out.labels = matrix.labels;
  out.feature_names.assign(names.begin(), names.end());
  out.values = matrix.values.select_columns(cols);
  if (matrix.standardization) {
    Standardization s;
    for (std::size_t c : cols) {
      s.mean.push_back(matrix.standardization->mean[c]);
      s.sd.push_back(matrix.standardization->sd[c]);
    }
    out.standardization = std::move(s);
  }
  return out;
}

FeatureMatrix labeled_only(const FeatureMatrix& matrix) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    if (matrix.labels[i]) ids.push_back(matrix.user_ids[i]);
  }
  return select_users(matrix, ids);
}

std::vector<Label> labels_of(const FeatureMatrix& matrix) {
  std::vector<Label> out;
  out.reserve(matrix.rows());
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    if (!matrix.labels[i]) {
      throw Error(errc::kInvalidArgument, "user '" + matrix.user_ids[i] + "' has no label");
    }
    out.push_back(*matrix.labels[i]);
  }
  return out;
}

std::string to_csv(const FeatureMatrix& matrix) {
  std::vector<std::string> header{"user_id"};
  header.insert(header.end(), matrix.feature_names.begin(), matrix.feature_names.end());
  header.emplace_back("label");
  std::string out = csv::join(header) + "\r\n";
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    std::vector<std::string> fields{matrix.user_ids[r]};
    for (double v : matrix.values.row(r)) fields.push_back(csv::format_double(v));
    fields.emplace_back(matrix.labels[r] ? std::string(to_string(*matrix.labels[r])) : std::string());
    out += csv::join(fields) + "\r\n";
  }
  return out;
}

FeatureMatrix parse_feature_csv(std::string_view document) {
  const auto records = csv::parse(document);
  if (records.empty()) throw Error(errc::kParse, "feature CSV is empty");
  const auto& header = records.front();
  if (header.size() < 3 || header.front() != "user_id" || header.back() != "label") {
    throw Error(errc::kParse, "feature CSV header must be user_id,<features...>,label");
  }
  FeatureMatrix fm;
  fm.feature_names.assign(header.begin() + 1, header.end() - 1);
  fm.values = Matrix(0, fm.feature_names.size());
  std::vector<double> row(fm.feature_names.size());
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& rec = records[i];
    if (rec.size() == 1 && rec[0].empty()) continue;
    if (rec.size() != header.size()) {
      throw Error(errc::kParse, "feature CSV record " + std::to_string(i + 1) + " has " +
                                    std::to_string(rec.size()) + " fields, expected " +
                                    std::to_string(header.size()));
    }
    fm.user_ids.push_back(rec.front());
    for (std::size_t c = 0; c < row.size(); ++c) row[c] = csv::parse_double(rec[c + 1]);
    fm.values.append_row(row);
    if (rec.back().empty()) {
      fm.labels.emplace_back(std::nullopt);
    } else {
      auto label = parse_label(rec.back());
      if (!label) throw Error(errc::kParse, "unknown label '" + rec.back() + "' in feature CSV");
      fm.labels.emplace_back(label);
    }
  }
  return fm;
}

}  // namespace botsentinel
