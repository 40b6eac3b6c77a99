#include "botsentinel/kmeans.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <random>

#include "botsentinel/error.hpp"

namespace botsentinel {

namespace {

std::size_t nearest(const Matrix& centroids, std::span<const double> row) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.rows(); ++c) {
    const double d = squared_distance(centroids.row(c), row);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

std::mt19937_64 restart_rng(std::uint64_t seed, std::uint64_t restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart), 0x6b6du};
  return std::mt19937_64(seq);
}

}  // namespace

double kmeans_objective(const Matrix& data, const Matrix& centroids,
                        std::span<const std::size_t> assignment) {
  double j = 0.0;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    j += squared_distance(data.row(i), centroids.row(assignment[i]));
  }
  return j;
}

Matrix kmeans_plus_plus(const Matrix& data, std::size_t k, std::uint64_t seed) {
  if (data.rows() < k) throw Error(errc::kInsufficientData, "fewer rows than clusters");
  auto rng = restart_rng(seed, 0);
  Matrix centroids(k, data.cols());
  std::uniform_int_distribution<std::size_t> pick(0, data.rows() - 1);
  const std::size_t first = pick(rng);
  std::copy(data.row(first).begin(), data.row(first).end(), centroids.row(0).begin());

  std::vector<double> dist(data.rows(), std::numeric_limits<double>::infinity());
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < data.rows(); ++i) {
      dist[i] = std::min(dist[i], squared_distance(data.row(i), centroids.row(c - 1)));
      total += dist[i];
    }
    std::size_t chosen = 0;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double target = u(rng);
      for (chosen = 0; chosen + 1 < data.rows(); ++chosen) {
        target -= dist[chosen];
        if (target < 0.0 && dist[chosen] > 0.0) break;
      }
    } else {
      chosen = pick(rng);
    }
    std::copy(data.row(chosen).begin(), data.row(chosen).end(), centroids.row(c).begin());
  }
  return centroids;
}

LloydResult lloyd(const Matrix& data, Matrix centroids, int max_iterations) {
  const std::size_t n = data.rows();
  const std::size_t k = centroids.rows();
  const std::size_t d = data.cols();
  LloydResult out;
  out.assignment.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) out.assignment[i] = nearest(centroids, data.row(i));

  std::vector<std::size_t> sizes(k);
  for (int iter = 0; iter < max_iterations; ++iter) {
    ++out.iterations;
    // Update step.
    Matrix sums(k, d);
    std::fill(sizes.begin(), sizes.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      auto target = sums.row(out.assignment[i]);
      const auto src = data.row(i);
      for (std::size_t c = 0; c < d; ++c) target[c] += src[c];
      ++sizes[out.assignment[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] == 0) continue;
      for (std::size_t j = 0; j < d; ++j) centroids(c, j) = sums(c, j) / static_cast<double>(sizes[c]);
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] != 0) continue;
      // Re-seed an empty cluster on the point worst served by its centroid.
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double dd = squared_distance(data.row(i), centroids.row(out.assignment[i]));
        if (dd > far_d && sizes[out.assignment[i]] > 1) {
          far_d = dd;
          far = i;
        }
      }
      --sizes[out.assignment[far]];
      out.assignment[far] = c;
      sizes[c] = 1;
      std::copy(data.row(far).begin(), data.row(far).end(), centroids.row(c).begin());
    }
    out.objective_trace.push_back(kmeans_objective(data, centroids, out.assignment));

    // Assignment step; keep the current cluster unless another is strictly closer.
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = out.assignment[i];
      double best_d = squared_distance(data.row(i), centroids.row(best));
      for (std::size_t c = 0; c < k; ++c) {
        const double dd = squared_distance(data.row(i), centroids.row(c));
        if (dd < best_d || (dd == best_d && c < best)) {
          best_d = dd;
          best = c;
        }
      }
      if (best != out.assignment[i]) {
        out.assignment[i] = best;
        changed = true;
      }
    }
    if (!changed) {
      out.converged = true;
      break;
    }
  }
  out.centroids = std::move(centroids);
  out.objective = kmeans_objective(data, out.centroids, out.assignment);
  return out;
}

KMeansModel kmeans_fit(const Matrix& data, const KMeansOptions& options) {
  if (options.k == 0) throw Error(errc::kInvalidArgument, "k must be positive");
  if (data.rows() < options.k) {
    throw Error(errc::kInsufficientData, "k-means needs at least " + std::to_string(options.k) + " rows");
  }
  KMeansModel best;
  bool have = false;
  for (int r = 0; r < std::max(1, options.restarts); ++r) {
    const std::uint64_t restart_seed = options.seed * 1000003ULL + static_cast<std::uint64_t>(r);
    LloydResult run = lloyd(data, kmeans_plus_plus(data, options.k, restart_seed), options.max_iterations);
    if (!have || run.objective < best.objective) {
      best.centroids = std::move(run.centroids);
      best.objective = run.objective;
      best.iterations = run.iterations;
      have = true;
    }
  }
  best.seed = options.seed;
  return best;
}

KMeansModel kmeans_fit(const Matrix& data, std::span<const Label> labels, const KMeansOptions& options) {
  if (labels.size() != data.rows()) {
    throw Error(errc::kDimensionMismatch, "k-means labels do not match row count");
  }
  KMeansModel model = kmeans_fit(data, options);
  std::vector<std::array<std::size_t, 2>> votes(options.k, {0, 0});
  for (std::size_t i = 0; i < data.rows(); ++i) {
    ++votes[kmeans_cluster(model, data.row(i))][static_cast<std::size_t>(labels[i])];
  }
  model.cluster_to_label.clear();
  for (const auto& v : votes) {
    model.cluster_to_label.push_back(v[1] > v[0] ? Label::kInorganic : Label::kOrganic);
  }
  return model;
}

std::size_t kmeans_cluster(const KMeansModel& model, std::span<const double> row) {
  if (row.size() != model.centroids.cols()) {
    throw Error(errc::kDimensionMismatch, "row has " + std::to_string(row.size()) +
                                              " features, model expects " +
                                              std::to_string(model.centroids.cols()));
  }
  return nearest(model.centroids, row);
}

Label kmeans_predict(const KMeansModel& model, std::span<const double> row) {
  const std::size_t cluster = kmeans_cluster(model, row);
  if (!model.has_label_map()) {
    // Unsupervised models expose raw cluster ids; cluster 0 reads as organic.
    return cluster == 0 ? Label::kOrganic : Label::kInorganic;
  }
  return model.cluster_to_label[cluster];
}

std::vector<Label> kmeans_predict(const KMeansModel& model, const Matrix& rows) {
  std::vector<Label> out;
  out.reserve(rows.rows());
  for (std::size_t i = 0; i < rows.rows(); ++i) out.push_back(kmeans_predict(model, rows.row(i)));
  return out;
}

}  // namespace botsentinel
