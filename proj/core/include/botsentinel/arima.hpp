#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace botsentinel {

// Log-likelihood reported for a zero-variance fit, where the Gaussian
// likelihood diverges.
inline constexpr double kLoglikCap = 1e12;
inline constexpr std::size_t kMinArimaLength = 20;

struct ArimaFit {
  int p = 0;
  int q = 0;
  std::vector<double> ar_coeffs;  // phi_1..phi_p
  std::vector<double> ma_coeffs;  // theta_1..theta_q
  double sigma2 = 0.0;            // RSS / n_used
  double loglik = 0.0;
  double aic = 0.0;
  int fit_length = 1;             // p + q + 1
  std::size_t n_used = 0;         // residuals entering the sum of squares
  int iterations = 0;
};

// Gaussian profile log-likelihood at sigma2 = rss / n, capped at kLoglikCap.
double css_loglik(double rss, std::size_t n);

// Conditional-sum-of-squares ARMA(p,q) fit of an already mean-centred series,
// conditioning on the first `n_cond` observations (n_cond >= p). Minimised by
// Levenberg-Marquardt with the exact residual Jacobian, restricted to the stationary and
// invertible region (roots of both polynomials outside radius 1.01). Returns nothing when
// the optimiser cannot produce a finite residual sum of squares.
struct CssOutcome {
  bool ok = false;
  ArimaFit fit;
};
CssOutcome fit_arma_css(std::span<const double> centred, int p, int q, std::size_t n_cond);

struct ArimaSearch {
  ArimaFit best;
  std::vector<ArimaFit> candidates;  // every candidate that converged, grid order
};

// Mean-centres `x` and grid-searches (p,q) in [0,max_p] x [0,max_q], keeping
// the minimum-AIC candidate (earlier grid position wins ties). All candidates
// condition on the first max_p observations so their AIC values are comparable.
ArimaSearch search_arima(std::span<const double> x, int max_p = 3, int max_q = 3);
ArimaFit fit_arima(std::span<const double> x, int max_p = 3, int max_q = 3);

}  // namespace botsentinel
