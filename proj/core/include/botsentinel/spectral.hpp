#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "botsentinel/corpus.hpp"

namespace botsentinel {

// Power at the Fourier frequencies k/n (cycles per bin), k = 1..floor(n/2).
struct Periodogram {
  std::vector<double> frequencies;
  std::vector<double> powers;

  std::size_t size() const noexcept { return powers.size(); }
};

enum class SpectralMethod { kFft, kDirect };

// |sum_t (x_t - mean) exp(-2 pi i w t)|^2 evaluated at w = k/n.
// Requires at least four samples.
Periodogram periodogram(std::span<const double> counts, SpectralMethod method = SpectralMethod::kFft);
Periodogram periodogram(const BinnedSeries& series, SpectralMethod method = SpectralMethod::kFft);

// 1/w* for the highest-power frequency, lowest frequency winning ties.
// Returns 0 when the spectrum is identically zero.
double dominant_periodicity(const Periodogram& pgram);

struct LocalMaxima {
  std::size_t count = 0;
  double secondary_power_ratio = 0.0;  // second-largest peak / largest power
};

// Peaks are indices j with P[j] > P[j-1], P[j] >= P[j+1] and P[j] above the
// mean power. The end points only compare against their single neighbour.
LocalMaxima local_maxima(const Periodogram& pgram);

}  // namespace botsentinel
