#include <cmath>

#include "botsentinel/error.hpp"
#include "botsentinel/svm.hpp"

namespace botsentinel {

// Newton iteration with backtracking line search on the regularised
// cross-entropy (Lin, Lin and Weng's formulation of Platt scaling).
PlattParams fit_platt(std::span<const double> dec, std::span<const int> y) {
  if (dec.size() != y.size()) throw Error(errc::kDimensionMismatch, "decision/label size mismatch");
  double prior1 = 0.0;
  double prior0 = 0.0;
  for (int v : y) (v > 0 ? prior1 : prior0) += 1.0;

  constexpr int kMaxIter = 100;
  constexpr double kMinStep = 1e-10;
  constexpr double kSigma = 1e-12;
  constexpr double kEps = 1e-5;
  const double hi_target = (prior1 + 1.0) / (prior1 + 2.0);
  const double lo_target = 1.0 / (prior0 + 2.0);
  const std::size_t n = dec.size();
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = y[i] > 0 ? hi_target : lo_target;

  auto objective = [&](double a, double b) {
    double f = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = dec[i] * a + b;
      f += z >= 0.0 ? t[i] * z + std::log1p(std::exp(-z)) : (t[i] - 1.0) * z + std::log1p(std::exp(z));
    }
    return f;
  };

  PlattParams p{0.0, std::log((prior0 + 1.0) / (prior1 + 1.0))};
  double fval = objective(p.a, p.b);
  for (int it = 0; it < kMaxIter; ++it) {
    double h11 = kSigma, h22 = kSigma, h21 = 0.0, g1 = 0.0, g2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = dec[i] * p.a + p.b;
      double prob, qprob;
      if (z >= 0.0) {
        prob = std::exp(-z) / (1.0 + std::exp(-z));
        qprob = 1.0 / (1.0 + std::exp(-z));
      } else {
        prob = 1.0 / (1.0 + std::exp(z));
        qprob = std::exp(z) / (1.0 + std::exp(z));
      }
      const double d2 = prob * qprob;
      h11 += dec[i] * dec[i] * d2;
      h22 += d2;
      h21 += dec[i] * d2;
      const double d1 = t[i] - prob;
      g1 += dec[i] * d1;
      g2 += d1;
    }
    if (std::abs(g1) < kEps && std::abs(g2) < kEps) break;

    const double det = h11 * h22 - h21 * h21;
    const double da = -(h22 * g1 - h21 * g2) / det;
    const double db = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * da + g2 * db;

    double step = 1.0;
    while (step >= kMinStep) {
      const double na = p.a + step * da;
      const double nb = p.b + step * db;
      const double nf = objective(na, nb);
      if (nf < fval + 1e-4 * step * gd) {
        p = {na, nb};
        fval = nf;
        break;
      }
      step /= 2.0;
    }
    if (step < kMinStep) break;
  }
  return p;
}

}  // namespace botsentinel
