#include "botsentinel/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "botsentinel/error.hpp"

namespace botsentinel {

double nonconformity(double probability) {
  if (!(probability >= 0.0 && probability <= 1.0)) {
    throw Error(errc::kInvalidArgument, "probability outside [0,1]");
  }
  return 1.0 - probability;
}

ConformalCalibration calibrate_from_scores(std::vector<double> scores, double alpha) {
  if (scores.empty()) throw Error(errc::kInsufficientData, "calibration set is empty");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(errc::kInvalidArgument, "alpha must lie in (0,1)");
  std::sort(scores.begin(), scores.end());
  return {std::move(scores), alpha};
}

ConformalCalibration calibrate(const ProbabilityFn& model, const Matrix& rows,
                               std::span<const Label> labels, double alpha) {
  if (labels.size() != rows.rows()) throw Error(errc::kDimensionMismatch, "calibration labels/rows mismatch");
  std::vector<double> scores;
  scores.reserve(rows.rows());
  for (std::size_t i = 0; i < rows.rows(); ++i) scores.push_back(nonconformity(model(rows.row(i), labels[i])));
  return calibrate_from_scores(std::move(scores), alpha);
}

double p_value(double test_score, const ConformalCalibration& calibration) {
  const auto& s = calibration.scores;
  if (s.empty()) throw Error(errc::kInsufficientData, "calibration set is empty");
  const auto at_least = static_cast<double>(s.end() - std::lower_bound(s.begin(), s.end(), test_score));
  return (at_least + 1.0) / (static_cast<double>(s.size()) + 1.0);
}

bool PredictionSet::contains(Label label) const {
  return std::find(members.begin(), members.end(), label) != members.end();
}

PredictionSet prediction_set(const ProbabilityFn& model, std::span<const double> row,
                             const ConformalCalibration& calibration) {
  PredictionSet set;
  set.alpha = calibration.alpha;
  for (Label y : kLabelSpace) {
    const double p = p_value(nonconformity(model(row, y)), calibration);
    set.p_values[static_cast<std::size_t>(y)] = p;
    if (p > calibration.alpha) set.members.push_back(y);
  }
  return set;
}

Label forced_label(const PredictionSet& set) {
  return set.p_value_of(Label::kInorganic) > set.p_value_of(Label::kOrganic) ? Label::kInorganic
                                                                             : Label::kOrganic;
}

CoverageReport coverage_report(std::span<const PredictionSet> sets, std::span<const Label> truths) {
  if (sets.size() != truths.size()) throw Error(errc::kDimensionMismatch, "sets/truths length mismatch");
  CoverageReport r;
  if (sets.empty()) return r;
  std::size_t covered = 0;
  std::size_t size_sum = 0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    covered += sets[i].contains(truths[i]);
    size_sum += sets[i].size();
    ++r.size_histogram[std::min<std::size_t>(sets[i].size(), 2)];
    const double p = sets[i].p_value_of(truths[i]);
    const auto bin = std::min(kPValueBins - 1, static_cast<std::size_t>(std::floor(p * kPValueBins)));
    ++r.pvalue_histogram[bin];
  }
  const auto n = static_cast<double>(sets.size());
  r.empirical_coverage = static_cast<double>(covered) / n;
  r.mean_set_size = static_cast<double>(size_sum) / n;
  return r;
}

double uniformity_chi_square(std::span<const std::size_t> counts) {
  const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
  if (counts.empty() || total == 0.0) return 0.0;
  const double expected = total / static_cast<double>(counts.size());
  double stat = 0.0;
  for (std::size_t c : counts) {
    const double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  return stat;
}

}  // namespace botsentinel
