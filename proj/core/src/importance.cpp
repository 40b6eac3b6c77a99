#include "botsentinel/importance.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "botsentinel/csv.hpp"
#include "botsentinel/error.hpp"
#include "botsentinel/kmeans.hpp"
#include "botsentinel/metrics.hpp"

namespace botsentinel {

std::vector<std::string> ImportanceReport::ranking() const {
  std::vector<std::string> names;
  names.reserve(per_feature.size());
  for (const auto& [name, _] : per_feature) names.push_back(name);
  std::stable_sort(names.begin(), names.end(), [this](const std::string& a, const std::string& b) {
    return per_feature.at(a).accuracy_score > per_feature.at(b).accuracy_score;
  });
  return names;
}

bool normalise_drops(double baseline, std::span<const double> without, std::vector<double>& scores) {
  scores.resize(without.size());
  double total = 0.0;
  for (std::size_t i = 0; i < without.size(); ++i) {
    scores[i] = baseline - without[i];
    total += scores[i];
  }
  if (!(total > 0.0)) return false;
  for (double& s : scores) s = 100.0 * s / total;
  return true;
}

ImportanceReport accuracy_scores(const Trainer& trainer, const Matrix& train,
                                 std::span<const Label> train_labels, const Matrix& eval,
                                 std::span<const Label> eval_labels,
                                 std::span<const std::string> feature_names, std::uint64_t seed) {
  const std::size_t d = train.cols();
  if (d < 2) throw Error(errc::kInvalidArgument, "leave-one-feature-out needs at least two features");
  if (eval.cols() != d || feature_names.size() != d) {
    throw Error(errc::kDimensionMismatch, "train/eval/feature-name widths differ");
  }
  if (train_labels.size() != train.rows() || eval_labels.size() != eval.rows()) {
    throw Error(errc::kDimensionMismatch, "label count does not match row count");
  }
  if (eval.rows() == 0) throw Error(errc::kInsufficientData, "evaluation set is empty");

  ImportanceReport report;
  report.baseline_accuracy = accuracy(trainer(train, train_labels, eval, seed), eval_labels);

  std::vector<double> without(d);
  for (std::size_t i = 0; i < d; ++i) {
    without[i] = accuracy(trainer(train.without_column(i), train_labels, eval.without_column(i), seed), eval_labels);
  }
  std::vector<double> scores;
  report.degenerate = !normalise_drops(report.baseline_accuracy, without, scores);
  for (std::size_t i = 0; i < d; ++i) {
    report.per_feature[feature_names[i]] = {without[i], scores[i]};
  }
  return report;
}

Trainer kmeans_trainer() {
  return [](const Matrix& train, std::span<const Label> labels, const Matrix& eval, std::uint64_t seed) {
    KMeansOptions opt;
    opt.seed = seed;
    return kmeans_predict(kmeans_fit(train, labels, opt), eval);
  };
}

Trainer svm_trainer(SvmOptions options) {
  options.fit_probability = false;
  return [options](const Matrix& train, std::span<const Label> labels, const Matrix& eval, std::uint64_t seed) {
    SvmOptions opt = options;
    opt.seed = seed;
    return svm_predict(svm_fit(train, labels, opt), eval);
  };
}

std::string importance_csv(const ImportanceReport& report) {
  std::ostringstream out;
  out << "feature_name,accuracy_without,accuracy_score\r\n";
  for (const auto& name : report.ranking()) {
    const auto& f = report.per_feature.at(name);
    out << csv::quote(name) << ',' << csv::format_double(f.accuracy_without) << ','
        << csv::format_double(f.accuracy_score) << "\r\n";
  }
  return out.str();
}

}  // namespace botsentinel
