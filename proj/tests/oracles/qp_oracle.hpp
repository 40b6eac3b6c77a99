#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

struct QpSolution {
  std::vector<double> alpha;
  double objective = std::numeric_limits<double>::infinity();
};

// Soft-margin SVM dual, min 0.5 a'Qa - sum(a) s.t. 0 <= a <= C and y'a = 0,
// by enumerating every assignment of each variable to {0, C, free}. For the
// free set the KKT stationarity system (with the equality multiplier) is
// solved exactly; the best feasible candidate is the global optimum because
// the problem is convex. Meant for a handful of points only.
inline QpSolution svm_dual(const std::vector<std::vector<double>>& gram, const std::vector<int>& y, double c) {
  const std::size_t n = y.size();
  std::size_t combos = 1;
  for (std::size_t i = 0; i < n; ++i) combos *= 3;
  QpSolution best;
  const auto objective = [&](const std::vector<double>& a) {
    double v = 0;
    for (std::size_t i = 0; i < n; ++i) {
      v -= a[i];
      for (std::size_t j = 0; j < n; ++j) v += 0.5 * a[i] * a[j] * y[i] * y[j] * gram[i][j];
    }
    return v;
  };
  for (std::size_t code = 0; code < combos; ++code) {
    std::vector<int> state(n);
    std::size_t rest = code;
    for (std::size_t i = 0; i < n; ++i) {
      state[i] = static_cast<int>(rest % 3);  // 0: lower, 1: upper, 2: free
      rest /= 3;
    }
    std::vector<double> a(n, 0.0);
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < n; ++i) {
      if (state[i] == 1) a[i] = c;
      if (state[i] == 2) free.push_back(i);
    }
    if (!free.empty()) {
      const std::size_t m = free.size();
      Eigen::MatrixXd k(m + 1, m + 1);
      Eigen::VectorXd rhs(m + 1);
      for (std::size_t r = 0; r < m; ++r) {
        const std::size_t i = free[r];
        double fixed = 0;
        for (std::size_t j = 0; j < n; ++j) {
          if (state[j] == 1) fixed += y[i] * y[j] * gram[i][j] * c;
        }
        for (std::size_t s = 0; s < m; ++s) k(r, s) = y[i] * y[free[s]] * gram[i][free[s]];
        k(r, m) = y[i];
        rhs(r) = 1.0 - fixed;
      }
      double bound_sum = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (state[j] == 1) bound_sum += y[j] * c;
      }
      for (std::size_t s = 0; s < m; ++s) k(m, s) = y[free[s]];
      k(m, m) = 0;
      rhs(m) = -bound_sum;
      const Eigen::VectorXd sol = k.completeOrthogonalDecomposition().solve(rhs);
      if ((k * sol - rhs).norm() > 1e-9 * (1.0 + rhs.norm())) continue;
      for (std::size_t s = 0; s < m; ++s) a[free[s]] = sol(s);
    }
    double eq = 0;
    bool feasible = true;
    for (std::size_t i = 0; i < n; ++i) {
      eq += y[i] * a[i];
      if (a[i] < -1e-12 || a[i] > c + 1e-12) feasible = false;
    }
    if (!feasible || std::abs(eq) > 1e-9) continue;
    const double v = objective(a);
    if (v < best.objective) best = {a, v};
  }
  return best;
}

}  // namespace oracle
