#include "botsentinel/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include <fftw3.h>

#include "botsentinel/error.hpp"

namespace botsentinel {

namespace {

std::vector<double> centered(std::span<const double> x) {
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  std::vector<double> out(x.size());
  std::transform(x.begin(), x.end(), out.begin(), [mean](double v) { return v - mean; });
  return out;
}

void direct_powers(const std::vector<double>& x, std::vector<double>& powers) {
  const std::size_t n = x.size();
  for (std::size_t k = 1; k <= n / 2; ++k) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      // (k*t) mod n keeps the angle argument small and exact.
      const auto phase = static_cast<double>((k * t) % n) / static_cast<double>(n);
      const double angle = -2.0 * std::numbers::pi * phase;
      re += x[t] * std::cos(angle);
      im += x[t] * std::sin(angle);
    }
    powers[k - 1] = re * re + im * im;
  }
}

struct FftwPlan {
  fftw_plan plan = nullptr;
  ~FftwPlan() {
    if (plan) fftw_destroy_plan(plan);
  }
};

void fft_powers(std::vector<double>& x, std::vector<double>& powers) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> spectrum(n / 2 + 1);
  FftwPlan p;
  p.plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), x.data(),
                                reinterpret_cast<fftw_complex*>(spectrum.data()), FFTW_ESTIMATE);
  if (!p.plan) throw Error(errc::kInvalidArgument, "FFTW could not plan a transform of this size");
  fftw_execute(p.plan);
  for (std::size_t k = 1; k <= n / 2; ++k) powers[k - 1] = std::norm(spectrum[k]);
}

}  // namespace

Periodogram periodogram(std::span<const double> counts, SpectralMethod method) {
  const std::size_t n = counts.size();
  if (n < 4) throw Error(errc::kInsufficientData, "periodogram needs at least 4 samples");
  for (double v : counts) {
    if (!std::isfinite(v)) throw Error(errc::kInvalidArgument, "periodogram input must be finite");
  }

  std::vector<double> x = centered(counts);
  Periodogram out;
  out.frequencies.resize(n / 2);
  out.powers.resize(n / 2);
  for (std::size_t k = 1; k <= n / 2; ++k) {
    out.frequencies[k - 1] = static_cast<double>(k) / static_cast<double>(n);
  }
  if (method == SpectralMethod::kDirect) {
    direct_powers(x, out.powers);
  } else {
    fft_powers(x, out.powers);
  }
  return out;
}

Periodogram periodogram(const BinnedSeries& series, SpectralMethod method) {
  std::vector<double> counts(series.counts.begin(), series.counts.end());
  return periodogram(counts, method);
}

double dominant_periodicity(const Periodogram& pgram) {
  if (pgram.size() == 0) throw Error(errc::kInvalidArgument, "empty periodogram");
  // max_element returns the first maximum, i.e. the lowest frequency on ties.
  const auto best = std::max_element(pgram.powers.begin(), pgram.powers.end());
  if (*best <= 0.0) return 0.0;
  const double freq = pgram.frequencies[static_cast<std::size_t>(best - pgram.powers.begin())];
  return 1.0 / freq;
}

LocalMaxima local_maxima(const Periodogram& pgram) {
  const auto& p = pgram.powers;
  if (p.size() < 3) throw Error(errc::kInsufficientData, "local maxima need at least 3 powers");
  const double mean = std::accumulate(p.begin(), p.end(), 0.0) / static_cast<double>(p.size());

  std::vector<double> peaks;
  // A missing neighbour at either end of the spectrum counts as satisfied.
  for (std::size_t j = 0; j < p.size(); ++j) {
    const bool rises = j == 0 || p[j] > p[j - 1];
    const bool holds = j + 1 == p.size() || p[j] >= p[j + 1];
    if (rises && holds && p[j] > mean) peaks.push_back(p[j]);
  }
  LocalMaxima out;
  out.count = peaks.size();
  if (peaks.size() >= 2) {
    std::partial_sort(peaks.begin(), peaks.begin() + 2, peaks.end(), std::greater<>());
    const double largest = *std::max_element(p.begin(), p.end());
    out.secondary_power_ratio = largest > 0.0 ? peaks[1] / largest : 0.0;
  }
  return out;
}

}  // namespace botsentinel
