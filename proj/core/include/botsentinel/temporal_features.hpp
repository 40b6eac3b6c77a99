#pragma once

#include <cstdint>
#include <vector>

#include "botsentinel/arima.hpp"
#include "botsentinel/corpus.hpp"
#include "botsentinel/spectral.hpp"

namespace botsentinel {

struct TemporalFeatures {
  double periodicity = 0.0;  // bins per cycle, 0 when the spectrum is flat
  double loglik = 0.0;
  double sumsq_ar = 0.0;     // sum of squared AR coefficients
  double error_var = 0.0;
  int fit_length = 1;
  int n_local_maxima = 0;
  double secondary_power_ratio = 0.0;
};

// Gaps between consecutive tweets in seconds. Needs at least two tweets.
std::vector<double> intervals(const UserHistory& history);

struct TemporalOptions {
  std::int64_t bin_width = kDefaultBinWidth;
  int max_p = 3;
  int max_q = 3;
};

// Minimum history length: the interval series must reach kMinArimaLength.
inline constexpr std::size_t kMinTweetsForFeatures = kMinArimaLength + 1;

TemporalFeatures temporal_features(const UserHistory& history, const TemporalOptions& options = {});

}  // namespace botsentinel
