#include "botsentinel/temporal_features.hpp"

#include "botsentinel/error.hpp"

namespace botsentinel {

std::vector<double> intervals(const UserHistory& history) {
  if (history.tweets.size() < 2) {
    throw Error(errc::kInsufficientData, "intervals need at least two tweets");
  }
  std::vector<double> gaps;
  gaps.reserve(history.tweets.size() - 1);
  for (std::size_t j = 1; j < history.tweets.size(); ++j) {
    gaps.push_back(static_cast<double>(history.tweets[j].timestamp - history.tweets[j - 1].timestamp));
  }
  return gaps;
}

TemporalFeatures temporal_features(const UserHistory& history, const TemporalOptions& options) {
  if (history.tweets.size() < kMinTweetsForFeatures) {
    throw Error(errc::kInsufficientData,
                "user '" + history.user_id + "' has " + std::to_string(history.tweets.size()) +
                    " tweets; at least " + std::to_string(kMinTweetsForFeatures) +
                    " are required, exclude it from the feature matrix");
  }
  TemporalFeatures f;
  const Periodogram pgram = periodogram(bin_series(history, options.bin_width));
  f.periodicity = dominant_periodicity(pgram);
  const LocalMaxima peaks = local_maxima(pgram);
  f.n_local_maxima = static_cast<int>(peaks.count);
  f.secondary_power_ratio = peaks.secondary_power_ratio;

  const ArimaFit fit = fit_arima(intervals(history), options.max_p, options.max_q);
  f.loglik = fit.loglik;
  for (double phi : fit.ar_coeffs) f.sumsq_ar += phi * phi;
  f.error_var = fit.sigma2;
  f.fit_length = fit.fit_length;
  return f;
}

}  // namespace botsentinel
