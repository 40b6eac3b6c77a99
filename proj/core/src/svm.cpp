#include "botsentinel/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "botsentinel/error.hpp"

namespace botsentinel {

namespace {

constexpr double kTau = 1e-12;

std::vector<double> gram(const Matrix& x, const Kernel& kernel) {
  const std::size_t n = x.rows();
  std::vector<double> k(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = kernel(x.row(i), x.row(j));
      k[i * n + j] = v;
      k[j * n + i] = v;
    }
  }
  return k;
}

Kernel resolve_kernel(Kernel kernel, const Matrix& x) {
  if (kernel.type == KernelType::kRbf && !(kernel.gamma > 0.0)) kernel.gamma = default_rbf_gamma(x);
  return kernel;
}

}  // namespace

double Kernel::operator()(std::span<const double> a, std::span<const double> b) const {
  if (type == KernelType::kLinear) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
  }
  return std::exp(-gamma * squared_distance(a, b));
}

double default_rbf_gamma(const Matrix& x) {
  if (x.rows() == 0 || x.cols() == 0) return 1.0;
  double mean_var = 0.0;
  for (std::size_t c = 0; c < x.cols(); ++c) {
    const auto col = x.column(c);
    const double mean = std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(col.size());
    double var = 0.0;
    for (double v : col) var += (v - mean) * (v - mean);
    mean_var += var / static_cast<double>(col.size());
  }
  mean_var /= static_cast<double>(x.cols());
  return mean_var > 0.0 ? 1.0 / (static_cast<double>(x.cols()) * mean_var) : 1.0;
}

double dual_objective(const Matrix& x, std::span<const int> y, const Kernel& kernel,
                      std::span<const double> alpha) {
  double quad = 0.0;
  double lin = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    lin += alpha[i];
    if (alpha[i] == 0.0) continue;
    for (std::size_t j = 0; j < x.rows(); ++j) {
      quad += alpha[i] * alpha[j] * y[i] * y[j] * kernel(x.row(i), x.row(j));
    }
  }
  return 0.5 * quad - lin;
}

SmoResult smo_solve(const Matrix& x, std::span<const int> y, const Kernel& kernel,
                    const SmoOptions& options) {
  const std::size_t n = x.rows();
  if (y.size() != n) throw Error(errc::kDimensionMismatch, "label count does not match rows");
  if (!(options.c > 0.0)) throw Error(errc::kInvalidArgument, "C must be positive");
  const double c = options.c;
  const std::vector<double> k = gram(x, kernel);
  auto q = [&](std::size_t i, std::size_t j) { return y[i] * y[j] * k[i * n + j]; };

  SmoResult out;
  out.alpha.assign(n, 0.0);
  std::vector<double> grad(n, -1.0);  // gradient of 0.5 a'Qa - e'a
  auto& alpha = out.alpha;
  auto in_up = [&](std::size_t t) { return (y[t] == 1 && alpha[t] < c) || (y[t] == -1 && alpha[t] > 0.0); };
  auto in_low = [&](std::size_t t) { return (y[t] == 1 && alpha[t] > 0.0) || (y[t] == -1 && alpha[t] < c); };

  const long max_iter = options.max_iterations > 0
                            ? options.max_iterations
                            : std::max<long>(10000, 10L * static_cast<long>(n) * static_cast<long>(n));
  long iter = 0;
  for (;; ++iter) {
    double g_max = -std::numeric_limits<double>::infinity();
    double g_min = std::numeric_limits<double>::infinity();
    std::size_t i = n;
    std::size_t j = n;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -y[t] * grad[t];
      if (in_up(t) && v > g_max) {
        g_max = v;
        i = t;
      }
      if (in_low(t) && v < g_min) {
        g_min = v;
        j = t;
      }
    }
    if (i == n || j == n || g_max - g_min < options.tolerance) break;
    if (iter >= max_iter) {
      throw Error(errc::kNotConverged,
                  "SMO did not converge after " + std::to_string(iter) + " iterations");
    }

    const double old_ai = alpha[i];
    const double old_aj = alpha[j];
    if (y[i] != y[j]) {
      double quad = q(i, i) + q(j, j) + 2.0 * q(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else if (alpha[j] > c) {
        alpha[j] = c;
        alpha[i] = c + diff;
      }
    } else {
      double quad = q(i, i) + q(j, j) - 2.0 * q(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = sum - c;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > c) {
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = sum - c;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }
    const double di = alpha[i] - old_ai;
    const double dj = alpha[j] - old_aj;
    for (std::size_t t = 0; t < n; ++t) grad[t] += q(i, t) * di + q(j, t) * dj;
  }
  out.iterations = iter;

  // Bias: mean over free vectors, else the midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (alpha[t] >= c) {
      if (y[t] == -1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0.0) {
      if (y[t] == 1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++n_free;
      free_sum += yg;
    }
  }
  const double rho = n_free > 0 ? free_sum / static_cast<double>(n_free) : (ub + lb) / 2.0;
  out.bias = -rho;

  double obj = 0.0;
  for (std::size_t t = 0; t < n; ++t) obj += alpha[t] * (grad[t] - 1.0);
  out.dual_objective = 0.5 * obj;  // 0.5 a'(Qa - e) - 0.5 e'a
  return out;
}

namespace {

SvmModel fit_decision_function(const Matrix& x, std::span<const int> y, const Kernel& kernel,
                               const SvmOptions& options) {
  SmoOptions smo;
  smo.c = options.c;
  smo.tolerance = options.tolerance;
  const SmoResult res = smo_solve(x, y, kernel, smo);

  SvmModel model;
  model.kernel = kernel;
  model.c = options.c;
  model.dimension = x.cols();
  model.bias = res.bias;
  model.iterations = res.iterations;
  model.support_vectors = Matrix(0, x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    if (res.alpha[i] > kSupportThreshold) {
      model.support_vectors.append_row(x.row(i));
      model.dual_coeffs.push_back(res.alpha[i] * y[i]);
    }
  }
  return model;
}

// Out-of-fold decision values for the sigmoid fit.
std::vector<double> cross_validated_decisions(const Matrix& x, std::span<const int> y,
                                              const Kernel& kernel, const SvmOptions& options) {
  const std::size_t n = x.rows();
  const std::size_t folds = std::min<std::size_t>(static_cast<std::size_t>(std::max(2, options.platt_folds)), n);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                    0x706cu};
  std::mt19937_64 rng(seq);
  std::shuffle(perm.begin(), perm.end(), rng);

  std::vector<double> dec(n, 0.0);
  for (std::size_t f = 0; f < folds; ++f) {
    const std::size_t begin = f * n / folds;
    const std::size_t end = (f + 1) * n / folds;
    std::vector<std::size_t> train_idx;
    for (std::size_t t = 0; t < n; ++t) {
      if (t < begin || t >= end) train_idx.push_back(perm[t]);
    }
    std::vector<int> train_y;
    int pos = 0;
    for (std::size_t t : train_idx) {
      train_y.push_back(y[t]);
      pos += y[t] == 1;
    }
    const bool single_class = pos == 0 || pos == static_cast<int>(train_idx.size());
    if (single_class) {
      const double v = pos > 0 ? 1.0 : -1.0;
      for (std::size_t t = begin; t < end; ++t) dec[perm[t]] = v;
      continue;
    }
    SvmOptions inner = options;
    inner.fit_probability = false;
    const SvmModel sub = fit_decision_function(x.select_rows(train_idx), train_y, kernel, inner);
    for (std::size_t t = begin; t < end; ++t) dec[perm[t]] = svm_decision(sub, x.row(perm[t]));
  }
  return dec;
}

}  // namespace

SvmModel svm_fit(const Matrix& x, std::span<const Label> labels, const SvmOptions& options) {
  if (labels.size() != x.rows()) throw Error(errc::kDimensionMismatch, "label count does not match rows");
  std::vector<int> y(labels.size());
  std::transform(labels.begin(), labels.end(), y.begin(), svm_sign);
  const bool has_pos = std::find(y.begin(), y.end(), 1) != y.end();
  const bool has_neg = std::find(y.begin(), y.end(), -1) != y.end();
  if (!has_pos || !has_neg) throw Error(errc::kInsufficientData, "SVM training needs both classes");

  const Kernel kernel = resolve_kernel(options.kernel, x);
  SvmModel model = fit_decision_function(x, y, kernel, options);
  if (options.fit_probability) {
    model.platt = fit_platt(cross_validated_decisions(x, y, kernel, options), y);
  }
  return model;
}

double svm_decision(const SvmModel& model, std::span<const double> row) {
  if (row.size() != model.dimension) {
    throw Error(errc::kDimensionMismatch, "row has " + std::to_string(row.size()) +
                                              " features, model expects " + std::to_string(model.dimension));
  }
  double f = model.bias;
  for (std::size_t i = 0; i < model.dual_coeffs.size(); ++i) {
    f += model.dual_coeffs[i] * model.kernel(model.support_vectors.row(i), row);
  }
  return f;
}

Label svm_predict(const SvmModel& model, std::span<const double> row) {
  return svm_decision(model, row) >= 0.0 ? Label::kOrganic : Label::kInorganic;
}

std::vector<Label> svm_predict(const SvmModel& model, const Matrix& rows) {
  std::vector<Label> out;
  out.reserve(rows.rows());
  for (std::size_t i = 0; i < rows.rows(); ++i) out.push_back(svm_predict(model, rows.row(i)));
  return out;
}

double svm_probability(const SvmModel& model, std::span<const double> row, Label label) {
  const double z = model.platt.a * svm_decision(model, row) + model.platt.b;
  // P(organic) = 1/(1+e^z), P(inorganic) = 1/(1+e^-z); both in the form that
  // does not cancel for large |z|.
  const double s = label == Label::kOrganic ? z : -z;
  return s >= 0.0 ? std::exp(-s) / (1.0 + std::exp(-s)) : 1.0 / (1.0 + std::exp(s));
}

double svm_proba(const SvmModel& model, std::span<const double> row) {
  return svm_probability(model, row, Label::kOrganic);
}

}  // namespace botsentinel
