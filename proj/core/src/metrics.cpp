#include "botsentinel/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/binomial.hpp>

#include "botsentinel/error.hpp"

namespace botsentinel {

namespace {

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

EvalReport confusion_statistics(const ConfusionMatrix& cm) {
  namespace bm = boost::math;
  EvalReport r;
  r.confusion = cm;
  const auto tp = static_cast<double>(cm.true_positive());
  const auto fp = static_cast<double>(cm.false_positive());
  const auto fn = static_cast<double>(cm.false_negative());
  const auto tn = static_cast<double>(cm.true_negative());
  const std::size_t total = cm.total();
  const auto n = static_cast<double>(total);
  if (total == 0) return r;

  const std::size_t correct = cm.true_positive() + cm.true_negative();
  r.accuracy = static_cast<double>(correct) / n;
  r.accuracy_ci_low = correct == 0 ? 0.0
                                   : bm::quantile(bm::beta_distribution<>(static_cast<double>(correct),
                                                                          n - static_cast<double>(correct) + 1.0),
                                                  0.025);
  r.accuracy_ci_high = correct == total ? 1.0
                                        : bm::quantile(bm::beta_distribution<>(static_cast<double>(correct) + 1.0,
                                                                               n - static_cast<double>(correct)),
                                                       0.975);

  const double actual_pos = tp + fn;
  const double actual_neg = fp + tn;
  r.nir = std::max(actual_pos, actual_neg) / n;
  if (correct == 0) {
    r.acc_vs_nir_pvalue = 1.0;
  } else if (r.nir >= 1.0) {
    r.acc_vs_nir_pvalue = correct == total ? 1.0 : 0.0;
  } else {
    r.acc_vs_nir_pvalue =
        bm::cdf(bm::complement(bm::binomial_distribution<>(n, r.nir), static_cast<double>(correct) - 1.0));
  }

  const double pred_pos = tp + fp;
  const double pred_neg = fn + tn;
  const double expected = (pred_pos * actual_pos + pred_neg * actual_neg) / (n * n);
  const double observed = r.accuracy;
  r.kappa = expected < 1.0 ? (observed - expected) / (1.0 - expected) : (observed == 1.0 ? 1.0 : 0.0);

  const std::size_t b = cm.false_positive();
  const std::size_t c = cm.false_negative();
  if (b + c == 0) {
    r.mcnemar_pvalue = 1.0;
  } else {
    const bm::binomial_distribution<> dist(static_cast<double>(b + c), 0.5);
    r.mcnemar_pvalue = std::min(1.0, 2.0 * bm::cdf(dist, static_cast<double>(std::min(b, c))));
  }

  r.sensitivity = ratio(tp, actual_pos);
  r.specificity = ratio(tn, actual_neg);
  r.ppv = ratio(tp, pred_pos);
  r.npv = ratio(tn, pred_neg);
  r.prevalence = actual_pos / n;
  r.detection_rate = tp / n;
  r.detection_prevalence = pred_pos / n;
  r.balanced_accuracy = (r.sensitivity + r.specificity) / 2.0;
  r.f_score = ratio(2.0 * r.ppv * r.sensitivity, r.ppv + r.sensitivity);
  return r;
}

double auc_rank(std::span<const double> scores, std::span<const bool> positive) {
  if (scores.size() != positive.size()) throw Error(errc::kDimensionMismatch, "score/label length mismatch");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Midranks over tie groups.
  double pos_rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (positive[order[k]]) {
        pos_rank_sum += midrank;
        ++n_pos;
      }
    }
    i = j;
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) throw Error(errc::kInsufficientData, "AUC needs both classes");
  const double np = static_cast<double>(n_pos);
  return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * static_cast<double>(n_neg));
}

std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const bool> positive) {
  if (scores.size() != positive.size()) throw Error(errc::kDimensionMismatch, "score/label length mismatch");
  const std::size_t n = scores.size();
  const auto n_pos = static_cast<double>(std::count(positive.begin(), positive.end(), true));
  const double n_neg = static_cast<double>(n) - n_pos;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  std::vector<RocPoint> points;
  points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  double tp = 0.0;
  double fp = 0.0;
  for (std::size_t i = 0; i < n;) {
    const double threshold = scores[order[i]];
    while (i < n && scores[order[i]] == threshold) {
      (positive[order[i]] ? tp : fp) += 1.0;
      ++i;
    }
    points.push_back({ratio(fp, n_neg), ratio(tp, n_pos), threshold});
  }
  return points;
}

double accuracy(std::span<const Label> predicted, std::span<const Label> truth) {
  if (predicted.size() != truth.size()) throw Error(errc::kDimensionMismatch, "prediction/truth length mismatch");
  if (truth.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) correct += predicted[i] == truth[i];
  return static_cast<double>(correct) / static_cast<double>(truth.size());
}

EvalReport evaluate(std::span<const Label> predicted, std::span<const double> scores,
                    std::span<const Label> truth, Label positive_class) {
  if (predicted.size() != truth.size() || scores.size() != truth.size()) {
    throw Error(errc::kDimensionMismatch, "evaluate: predicted, scores and truth lengths differ");
  }
  if (truth.empty()) throw Error(errc::kInsufficientData, "evaluate needs at least one observation");

  ConfusionMatrix cm;
  const auto is_pos = std::make_unique<bool[]>(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const std::size_t p = predicted[i] == positive_class ? 0 : 1;
    const std::size_t a = truth[i] == positive_class ? 0 : 1;
    ++cm.cells[p][a];
    is_pos[i] = a == 0;
  }
  EvalReport report = confusion_statistics(cm);
  report.positive_class = positive_class;

  const std::span<const bool> pos_span(is_pos.get(), truth.size());
  const auto n_pos = std::count(pos_span.begin(), pos_span.end(), true);
  if (n_pos > 0 && static_cast<std::size_t>(n_pos) < truth.size()) {
    report.roc_points = roc_curve(scores, pos_span);
    report.auc = auc_rank(scores, pos_span);
  }
  return report;
}

}  // namespace botsentinel
