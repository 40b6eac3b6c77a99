#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "botsentinel/corpus.hpp"
#include "botsentinel/matrix.hpp"

namespace botsentinel {

struct KMeansModel {
  Matrix centroids;                 // K x d
  std::vector<Label> cluster_to_label;  // empty when fitted without labels
  double objective = 0.0;           // within-cluster sum of squares
  int iterations = 0;
  std::uint64_t seed = 0;

  bool has_label_map() const noexcept { return !cluster_to_label.empty(); }
};

struct LloydResult {
  Matrix centroids;
  std::vector<std::size_t> assignment;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;               // reached an assignment fixpoint
  std::vector<double> objective_trace;  // J after every centroid update
};

inline constexpr int kMaxLloydIterations = 300;

// Alternates nearest-centroid assignment and mean updates from the given seeds
// until the assignment stops changing. An emptied cluster is moved onto the
// point farthest from its current centroid.
LloydResult lloyd(const Matrix& data, Matrix centroids, int max_iterations = kMaxLloydIterations);

// k-means++ seeding.
Matrix kmeans_plus_plus(const Matrix& data, std::size_t k, std::uint64_t seed);

double kmeans_objective(const Matrix& data, const Matrix& centroids,
                        std::span<const std::size_t> assignment);

struct KMeansOptions {
  std::size_t k = 2;
  std::uint64_t seed = 0;
  int restarts = 10;
  int max_iterations = kMaxLloydIterations;
};

// Best of `restarts` seeded runs by objective. With labels, every cluster is
// mapped to the majority training label (ties go to organic).
KMeansModel kmeans_fit(const Matrix& data, std::span<const Label> labels, const KMeansOptions& options);
KMeansModel kmeans_fit(const Matrix& data, const KMeansOptions& options);

// Nearest centroid, lower index on ties.
std::size_t kmeans_cluster(const KMeansModel& model, std::span<const double> row);
Label kmeans_predict(const KMeansModel& model, std::span<const double> row);
std::vector<Label> kmeans_predict(const KMeansModel& model, const Matrix& rows);

}  // namespace botsentinel
