#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "botsentinel/corpus.hpp"
#include "botsentinel/matrix.hpp"
#include "botsentinel/semantic_features.hpp"
#include "botsentinel/temporal_features.hpp"

namespace botsentinel {

inline constexpr std::size_t kFeatureCount = 19;

// Column order of every assembled feature matrix: 7 temporal then 12 semantic
// (lexical diversity, word-count mean and variance, hashtag rate, five top-word
// frequencies, three sentiment scores). unique_words stays descriptive only.
const std::array<std::string_view, kFeatureCount>& canonical_feature_names();

struct Standardization {
  std::vector<double> mean;
  std::vector<double> sd;  // population standard deviation; 0 marks a constant column

  bool is_constant(std::size_t c) const { return sd[c] == 0.0; }
  friend bool operator==(const Standardization&, const Standardization&) = default;
};

struct FeatureMatrix {
  std::vector<std::string> user_ids;
  std::vector<std::string> feature_names;
  Matrix values;
  std::vector<std::optional<Label>> labels;  // one per row
  std::optional<Standardization> standardization;

  std::size_t rows() const noexcept { return values.rows(); }
  std::size_t cols() const noexcept { return values.cols(); }
  std::optional<std::size_t> column_index(std::string_view name) const;
};

std::array<double, kFeatureCount> feature_row(const TemporalFeatures& t, const SemanticFeatures& s);

// Rows come out in user_id order. Throws Error(invalid_argument) listing the
// ids present in only one of the inputs.
FeatureMatrix assemble_matrix(const std::map<std::string, TemporalFeatures>& temporal,
                              const std::map<std::string, SemanticFeatures>& semantic,
                              const std::map<std::string, std::optional<Label>>& labels = {});

Standardization fit_standardization(const Matrix& values);
Matrix apply_standardization(const Matrix& values, const Standardization& stats);

// Fits (mean, sd) on this matrix and returns the transformed copy carrying them.
FeatureMatrix standardize(const FeatureMatrix& matrix);
// Transforms with previously fitted statistics (e.g. calibration/test rows).
FeatureMatrix standardize_with(const FeatureMatrix& matrix, const Standardization& stats);

// Rows / columns come out in the order requested.
FeatureMatrix select_users(const FeatureMatrix& matrix, std::span<const std::string> user_ids);
FeatureMatrix select_features(const FeatureMatrix& matrix, std::span<const std::string> names);
// Drops rows without a label.
FeatureMatrix labeled_only(const FeatureMatrix& matrix);
std::vector<Label> labels_of(const FeatureMatrix& matrix);

// Header: user_id, feature names..., label. Unlabeled rows have an empty label.
std::string to_csv(const FeatureMatrix& matrix);
FeatureMatrix parse_feature_csv(std::string_view document);

}  // namespace botsentinel
