#include "botsentinel/arima.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <Eigen/Dense>

#include "botsentinel/error.hpp"

namespace botsentinel {

namespace {

constexpr int kMaxIterations = 200;
// Polynomial roots must lie at least this far outside the unit circle.
constexpr double kMinRootModulus = 1.01;

// True when every root of 1 + sign * (c_1 z + ... + c_k z^k) has modulus above
// kMinRootModulus, i.e. the companion matrix has spectral radius below its inverse.
bool roots_outside(const double* coeffs, int k, double sign) {
  if (k == 0) return true;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(k, k);
  for (int j = 0; j < k; ++j) companion(0, j) = -sign * coeffs[j];
  for (int j = 1; j < k; ++j) companion(j, j - 1) = 1.0;
  const Eigen::VectorXcd eig = Eigen::EigenSolver<Eigen::MatrixXd>(companion, false).eigenvalues();
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    if (!(std::abs(eig[i]) < 1.0 / kMinRootModulus)) return false;
  }
  return true;
}

// Stationary AR part (1 - phi z ...) and invertible MA part (1 + theta z ...).
bool admissible(const Eigen::VectorXd& beta, int p, int q) {
  return roots_outside(beta.data(), p, -1.0) && roots_outside(beta.data() + p, q, 1.0);
}

struct Workspace {
  std::size_t n = 0;
  std::size_t n_cond = 0;
  int p = 0;
  int q = 0;
  std::vector<double> resid;
  std::vector<double> jac;  // row-major, (n - n_cond) x (p + q)
};

// Residuals e_t = y_t - sum phi_k y_{t-k} - sum theta_k e_{t-k} for t >= n_cond,
// with pre-sample residuals fixed at zero. When `with_jacobian` is set the
// derivatives de_t/dparam follow the same recursion.
double residuals(std::span<const double> y, const Eigen::VectorXd& beta, Workspace& ws,
                 bool with_jacobian) {
  const std::size_t n = ws.n;
  const std::size_t m = static_cast<std::size_t>(ws.p + ws.q);
  const std::size_t rows = n - ws.n_cond;
  ws.resid.assign(n, 0.0);
  if (with_jacobian) ws.jac.assign(rows * m, 0.0);

  double rss = 0.0;
  for (std::size_t t = ws.n_cond; t < n; ++t) {
    double e = y[t];
    for (int k = 1; k <= ws.p; ++k) e -= beta[k - 1] * y[t - k];
    for (int k = 1; k <= ws.q; ++k) {
      if (t >= ws.n_cond + static_cast<std::size_t>(k)) e -= beta[ws.p + k - 1] * ws.resid[t - k];
    }
    ws.resid[t] = e;
    rss += e * e;

    if (with_jacobian) {
      double* row = &ws.jac[(t - ws.n_cond) * m];
      for (int k = 1; k <= ws.p; ++k) row[k - 1] = -y[t - k];
      for (int k = 1; k <= ws.q; ++k) {
        row[ws.p + k - 1] =
            t >= ws.n_cond + static_cast<std::size_t>(k) ? -ws.resid[t - k] : 0.0;
      }
      for (int j = 1; j <= ws.q; ++j) {
        if (t < ws.n_cond + static_cast<std::size_t>(j)) break;
        const double theta = beta[ws.p + j - 1];
        const double* prev = &ws.jac[(t - j - ws.n_cond) * m];
        for (std::size_t c = 0; c < m; ++c) row[c] -= theta * prev[c];
      }
    }
    if (!std::isfinite(rss)) return std::numeric_limits<double>::infinity();
  }
  return rss;
}

}  // namespace

double css_loglik(double rss, std::size_t n) {
  const double sigma2 = rss / static_cast<double>(n);
  if (!(sigma2 > 0.0)) return kLoglikCap;
  const double ll =
      -0.5 * static_cast<double>(n) * (std::log(2.0 * std::numbers::pi * sigma2) + 1.0);
  return std::min(ll, kLoglikCap);
}

CssOutcome fit_arma_css(std::span<const double> centred, int p, int q, std::size_t n_cond) {
  if (p < 0 || q < 0) throw Error(errc::kInvalidArgument, "ARMA orders must be nonnegative");
  if (n_cond < static_cast<std::size_t>(p) || n_cond >= centred.size()) {
    throw Error(errc::kInvalidArgument, "invalid conditioning length for ARMA fit");
  }
  Workspace ws;
  ws.n = centred.size();
  ws.n_cond = n_cond;
  ws.p = p;
  ws.q = q;
  const int m = p + q;
  const std::size_t rows = ws.n - n_cond;

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(m);
  double rss = residuals(centred, beta, ws, m > 0);
  CssOutcome out;
  if (!std::isfinite(rss)) return out;

  Workspace trial_ws = ws;
  int iter = 0;
  bool converged = false;
  double lambda = 1e-3;
  while (m > 0 && !converged && iter < kMaxIterations) {
    ++iter;
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> jac(
        ws.jac.data(), static_cast<Eigen::Index>(rows), m);
    Eigen::Map<const Eigen::VectorXd> r(ws.resid.data() + n_cond, static_cast<Eigen::Index>(rows));
    const Eigen::MatrixXd hess = jac.transpose() * jac;
    const Eigen::VectorXd grad = jac.transpose() * r;
    const double scale = std::max(hess.diagonal().maxCoeff(), 1e-300);

    bool accepted = false;
    while (lambda < 1e12) {
      Eigen::MatrixXd damped = hess;
      for (int i = 0; i < m; ++i) damped(i, i) += lambda * std::max(hess(i, i), 1e-12 * scale);
      const Eigen::VectorXd step = damped.ldlt().solve(-grad);
      if (!step.allFinite()) {
        lambda *= 10.0;
        continue;
      }
      const Eigen::VectorXd trial = beta + step;
      if (!admissible(trial, p, q)) {
        lambda *= 10.0;
        continue;
      }
      const double trial_rss = residuals(centred, trial, trial_ws, false);
      if (std::isfinite(trial_rss) && trial_rss < rss) {
        const double improvement = rss - trial_rss;
        const double step_norm = step.norm();
        beta = trial;
        rss = residuals(centred, beta, ws, true);
        lambda = std::max(lambda / 10.0, 1e-12);
        accepted = true;
        if (improvement <= 1e-10 * rss || step_norm <= 1e-8 * (beta.norm() + 1e-8)) {
          converged = true;
        }
        break;
      }
      lambda *= 10.0;
    }
    if (!accepted) break;  // no descent direction left: local minimum
  }

  ArimaFit& fit = out.fit;
  fit.p = p;
  fit.q = q;
  fit.ar_coeffs.assign(beta.data(), beta.data() + p);
  fit.ma_coeffs.assign(beta.data() + p, beta.data() + m);
  fit.n_used = rows;
  fit.sigma2 = rss / static_cast<double>(rows);
  fit.loglik = css_loglik(rss, rows);
  fit.fit_length = p + q + 1;
  fit.aic = -2.0 * fit.loglik + 2.0 * static_cast<double>(fit.fit_length);
  fit.iterations = iter;
  out.ok = std::isfinite(fit.sigma2);
  return out;
}

ArimaSearch search_arima(std::span<const double> x, int max_p, int max_q) {
  if (x.size() < kMinArimaLength) {
    throw Error(errc::kInsufficientData,
                "ARIMA fitting needs at least " + std::to_string(kMinArimaLength) + " observations");
  }
  if (max_p < 0 || max_p > 3 || max_q < 0 || max_q > 3) {
    throw Error(errc::kInvalidArgument, "max_p and max_q must lie in [0,3]");
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw Error(errc::kInvalidArgument, "ARIMA input must be finite");
  }

  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  std::vector<double> y(x.size());
  std::transform(x.begin(), x.end(), y.begin(), [mean](double v) { return v - mean; });

  ArimaSearch search;
  bool have_best = false;
  for (int p = 0; p <= max_p; ++p) {
    for (int q = 0; q <= max_q; ++q) {
      CssOutcome c = fit_arma_css(y, p, q, static_cast<std::size_t>(max_p));
      if (!c.ok) continue;
      if (!have_best || c.fit.aic < search.best.aic) {
        search.best = c.fit;
        have_best = true;
      }
      search.candidates.push_back(std::move(c.fit));
    }
  }
  if (!have_best) throw Error(errc::kNotConverged, "no ARIMA candidate could be fitted");
  return search;
}

ArimaFit fit_arima(std::span<const double> x, int max_p, int max_q) {
  return search_arima(x, max_p, max_q).best;
}

}  // namespace botsentinel
