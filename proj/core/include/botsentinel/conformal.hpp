#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "botsentinel/corpus.hpp"
#include "botsentinel/matrix.hpp"

namespace botsentinel {

// Any classifier that yields P(label | row).
using ProbabilityFn = std::function<double(std::span<const double>, Label)>;

inline constexpr std::array<Label, 2> kLabelSpace{Label::kOrganic, Label::kInorganic};

// 1 - probability of the label; throws for inputs outside [0,1].
double nonconformity(double probability);

struct ConformalCalibration {
  std::vector<double> scores;  // ascending
  double alpha = 0.1;
};

ConformalCalibration calibrate(const ProbabilityFn& model, const Matrix& rows,
                               std::span<const Label> labels, double alpha = 0.1);
ConformalCalibration calibrate_from_scores(std::vector<double> scores, double alpha = 0.1);

// (#{calibration scores >= score} + 1) / (n + 1).
double p_value(double test_score, const ConformalCalibration& calibration);

struct PredictionSet {
  std::array<double, 2> p_values{};  // indexed by static_cast<size_t>(Label)
  std::vector<Label> members;        // labels with p-value > alpha
  double alpha = 0.1;

  double p_value_of(Label label) const { return p_values[static_cast<std::size_t>(label)]; }
  bool contains(Label label) const;
  std::size_t size() const { return members.size(); }
};

PredictionSet prediction_set(const ProbabilityFn& model, std::span<const double> row,
                             const ConformalCalibration& calibration);

// Single-label forcing: the label with the larger p-value, organic on ties.
Label forced_label(const PredictionSet& set);

inline constexpr std::size_t kPValueBins = 10;

struct CoverageReport {
  double empirical_coverage = 0.0;
  double mean_set_size = 0.0;
  std::array<std::size_t, 3> size_histogram{};          // sets of size 0, 1, 2
  std::array<std::size_t, kPValueBins> pvalue_histogram{};  // true-label p-values
};

CoverageReport coverage_report(std::span<const PredictionSet> sets, std::span<const Label> truths);

// Pearson statistic of the counts against a uniform expectation.
double uniformity_chi_square(std::span<const std::size_t> counts);

// Upper 1% point of chi-square with 9 degrees of freedom (10 equal bins).
inline constexpr double kChiSquare9Critical01 = 21.665994;

}  // namespace botsentinel
