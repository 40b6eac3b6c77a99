#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "botsentinel/feature_matrix.hpp"
#include "botsentinel/kmeans.hpp"
#include "botsentinel/svm.hpp"

namespace botsentinel {

inline constexpr int kModelFormatVersion = 1;

// A fitted model together with the feature roster and scaling it was trained on.
template <class Model>
struct ModelArtifact {
  std::vector<std::string> feature_names;
  Standardization standardization;
  Model model;
};

using SvmArtifact = ModelArtifact<SvmModel>;
using KMeansArtifact = ModelArtifact<KMeansModel>;

std::string serialize_model(const SvmArtifact& artifact);
std::string serialize_model(const KMeansArtifact& artifact);
SvmArtifact parse_svm_model(std::string_view document);
KMeansArtifact parse_kmeans_model(std::string_view document);

void save_model(const std::filesystem::path& path, const SvmArtifact& artifact);
void save_model(const std::filesystem::path& path, const KMeansArtifact& artifact);
SvmArtifact load_svm_model(const std::filesystem::path& path);
KMeansArtifact load_kmeans_model(const std::filesystem::path& path);

// Throws Error(feature_mismatch) unless the names agree in order.
void require_same_features(std::span<const std::string> model_features,
                           std::span<const std::string> data_features);

}  // namespace botsentinel
