#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "botsentinel/corpus.hpp"
#include "botsentinel/matrix.hpp"

namespace botsentinel {

enum class KernelType { kLinear, kRbf };

struct Kernel {
  KernelType type = KernelType::kRbf;
  double gamma = 0.0;  // rbf only; <= 0 means "derive from the training data"

  double operator()(std::span<const double> a, std::span<const double> b) const;
};

// 1 / (d * mean per-feature population variance), or 1 for degenerate data.
double default_rbf_gamma(const Matrix& x);

// Organic (the positive class) maps to +1.
inline int svm_sign(Label label) noexcept { return label == Label::kOrganic ? 1 : -1; }

struct SmoOptions {
  double c = 1.0;
  double tolerance = 1e-3;
  long max_iterations = 0;  // 0: ten passes of n pair updates per training point
};

struct SmoResult {
  std::vector<double> alpha;
  double bias = 0.0;
  long iterations = 0;
  double dual_objective = 0.0;  // 0.5 a'Qa - sum(a), minimised
};

// Soft-margin dual by SMO with maximal-violating-pair selection. Stops when
// the violation gap falls below the tolerance; throws Error(not_converged)
// with the iteration count otherwise.
SmoResult smo_solve(const Matrix& x, std::span<const int> y, const Kernel& kernel, const SmoOptions& options);

double dual_objective(const Matrix& x, std::span<const int> y, const Kernel& kernel,
                      std::span<const double> alpha);

struct PlattParams {
  double a = 0.0;
  double b = 0.0;
};

// Regularised maximum-likelihood sigmoid fit, P(+1 | f) = 1 / (1 + exp(a f + b)).
PlattParams fit_platt(std::span<const double> decision_values, std::span<const int> y);

struct SvmModel {
  Kernel kernel;
  double c = 1.0;
  std::size_t dimension = 0;
  Matrix support_vectors;
  std::vector<double> dual_coeffs;  // alpha_i * y_i
  double bias = 0.0;
  PlattParams platt;
  long iterations = 0;
};

struct SvmOptions {
  double c = 1.0;
  Kernel kernel;
  std::uint64_t seed = 0;
  double tolerance = 1e-3;
  bool fit_probability = true;
  int platt_folds = 5;
};

inline constexpr double kSupportThreshold = 1e-9;

SvmModel svm_fit(const Matrix& x, std::span<const Label> labels, const SvmOptions& options);

double svm_decision(const SvmModel& model, std::span<const double> row);
// Zero decision goes to the positive (organic) class.
Label svm_predict(const SvmModel& model, std::span<const double> row);
// Probability of the organic class.
double svm_proba(const SvmModel& model, std::span<const double> row);
double svm_probability(const SvmModel& model, std::span<const double> row, Label label);

std::vector<Label> svm_predict(const SvmModel& model, const Matrix& rows);

}  // namespace botsentinel
