#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "botsentinel/corpus.hpp"

namespace botsentinel {

// cells[predicted][actual]; index 0 is the positive class.
struct ConfusionMatrix {
  std::array<std::array<std::size_t, 2>, 2> cells{};

  std::size_t true_positive() const { return cells[0][0]; }
  std::size_t false_positive() const { return cells[0][1]; }
  std::size_t false_negative() const { return cells[1][0]; }
  std::size_t true_negative() const { return cells[1][1]; }
  std::size_t total() const { return cells[0][0] + cells[0][1] + cells[1][0] + cells[1][1]; }
};

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;
};

struct EvalReport {
  ConfusionMatrix confusion;
  Label positive_class = Label::kOrganic;
  double accuracy = 0.0;
  double accuracy_ci_low = 0.0;   // exact (Clopper-Pearson) 95%
  double accuracy_ci_high = 0.0;
  double nir = 0.0;               // no-information rate
  double acc_vs_nir_pvalue = 0.0; // one-sided exact binomial
  double kappa = 0.0;
  double mcnemar_pvalue = 0.0;    // exact binomial on discordant cells
  double sensitivity = 0.0;
  double specificity = 0.0;
  double ppv = 0.0;
  double npv = 0.0;
  double prevalence = 0.0;
  double detection_rate = 0.0;
  double detection_prevalence = 0.0;
  double balanced_accuracy = 0.0;
  double f_score = 0.0;
  std::vector<RocPoint> roc_points;
  std::optional<double> auc;      // absent when the truth has a single class
};

// Ratios with an empty denominator are reported as 0.
EvalReport confusion_statistics(const ConfusionMatrix& confusion);

// `scores` rank observations by how positive they look (higher = positive).
EvalReport evaluate(std::span<const Label> predicted, std::span<const double> scores,
                    std::span<const Label> truth, Label positive_class = Label::kOrganic);

// Mann-Whitney estimate of P(score_pos > score_neg) with ties counted half.
double auc_rank(std::span<const double> scores, std::span<const bool> positive);
std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const bool> positive);

double accuracy(std::span<const Label> predicted, std::span<const Label> truth);

}  // namespace botsentinel
