#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace oracle {

// Solves A x = b by Gaussian elimination with partial pivoting (long double).
inline std::vector<long double> solve(std::vector<std::vector<long double>> a, std::vector<long double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    }
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const long double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<long double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    long double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

// R^2 of regressing column j on the others plus an intercept, via the normal
// equations; rows are observations.
inline double r_squared(const std::vector<std::vector<double>>& rows, std::size_t j) {
  const std::size_t d = rows.front().size();
  std::vector<std::size_t> preds;
  for (std::size_t c = 0; c < d; ++c) {
    if (c != j) preds.push_back(c);
  }
  const std::size_t m = preds.size() + 1;
  std::vector<std::vector<long double>> xtx(m, std::vector<long double>(m, 0));
  std::vector<long double> xty(m, 0);
  for (const auto& r : rows) {
    std::vector<long double> z{1.0L};
    for (std::size_t c : preds) z.push_back(r[c]);
    for (std::size_t a = 0; a < m; ++a) {
      xty[a] += z[a] * r[j];
      for (std::size_t b = 0; b < m; ++b) xtx[a][b] += z[a] * z[b];
    }
  }
  const auto beta = solve(xtx, xty);
  long double mean = 0;
  for (const auto& r : rows) mean += r[j];
  mean /= static_cast<long double>(rows.size());
  long double rss = 0, tss = 0;
  for (const auto& r : rows) {
    long double fit = beta[0];
    for (std::size_t k = 0; k < preds.size(); ++k) fit += beta[k + 1] * r[preds[k]];
    rss += (r[j] - fit) * (r[j] - fit);
    tss += (r[j] - mean) * (r[j] - mean);
  }
  return static_cast<double>(1.0L - rss / tss);
}

inline double vif(const std::vector<std::vector<double>>& rows, std::size_t j) {
  return 1.0 / (1.0 - r_squared(rows, j));
}

}  // namespace oracle
