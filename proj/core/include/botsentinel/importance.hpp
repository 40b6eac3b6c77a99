#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "botsentinel/corpus.hpp"
#include "botsentinel/matrix.hpp"
#include "botsentinel/svm.hpp"

namespace botsentinel {

// Fits on (train, labels) and predicts the eval rows. Must be deterministic in seed.
using Trainer = std::function<std::vector<Label>(const Matrix& train, std::span<const Label> labels,
                                                 const Matrix& eval, std::uint64_t seed)>;

struct FeatureImportance {
  double accuracy_without = 0.0;
  double accuracy_score = 0.0;  // raw delta when the report is degenerate
};

struct ImportanceReport {
  double baseline_accuracy = 0.0;
  std::map<std::string, FeatureImportance> per_feature;
  bool degenerate = false;

  // Feature names ordered by accuracy_score descending, name ascending on ties.
  std::vector<std::string> ranking() const;
};

ImportanceReport accuracy_scores(const Trainer& trainer, const Matrix& train,
                                 std::span<const Label> train_labels, const Matrix& eval,
                                 std::span<const Label> eval_labels,
                                 std::span<const std::string> feature_names, std::uint64_t seed);

// AS_i = 100 (acc - acc_i) / sum_j (acc - acc_j). Returns false and leaves the
// raw drops in `scores` when the denominator is not positive.
bool normalise_drops(double baseline, std::span<const double> without, std::vector<double>& scores);

Trainer kmeans_trainer();
// The options' seed is replaced by the seed passed to the trainer.
Trainer svm_trainer(SvmOptions options);

std::string importance_csv(const ImportanceReport& report);

}  // namespace botsentinel
