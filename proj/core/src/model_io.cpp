#include "botsentinel/model_io.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "botsentinel/atomic_file.hpp"
#include "botsentinel/error.hpp"

namespace botsentinel {
namespace {

using Json = nlohmann::ordered_json;

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

Matrix matrix_from(const Json& j, std::size_t cols) {
  Matrix m(0, cols);
  for (const auto& row : j) {
    const auto values = row.get<std::vector<double>>();
    if (values.size() != cols) throw Error(errc::kParse, "model matrix row has the wrong width");
    m.append_row(values);
  }
  return m;
}

Json header(std::string_view kind, std::span<const std::string> names, const Standardization& s) {
  Json j;
  j["format"] = "botsentinel-model";
  j["version"] = kModelFormatVersion;
  j["kind"] = kind;
  j["feature_names"] = std::vector<std::string>(names.begin(), names.end());
  j["standardization"] = {{"mean", s.mean}, {"sd", s.sd}};
  return j;
}

template <class Artifact>
Json read_header(std::string_view document, std::string_view kind, Artifact& out) {
  Json j;
  try {
    j = Json::parse(document);
  } catch (const Json::parse_error& e) {
    throw Error(errc::kParse, std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format") != "botsentinel-model") throw Error(errc::kParse, "not a botsentinel model file");
    if (j.at("version").get<int>() != kModelFormatVersion) {
      throw Error(errc::kParse, "unsupported model format version " + j.at("version").dump());
    }
    if (j.at("kind").get<std::string>() != kind) {
      throw Error(errc::kParse, "expected a " + std::string(kind) + " model, found " + j.at("kind").dump());
    }
    out.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    out.standardization.mean = j.at("standardization").at("mean").get<std::vector<double>>();
    out.standardization.sd = j.at("standardization").at("sd").get<std::vector<double>>();
  } catch (const Json::exception& e) {
    throw Error(errc::kParse, std::string("malformed model file: ") + e.what());
  }
  const auto d = out.feature_names.size();
  if (out.standardization.mean.size() != d || out.standardization.sd.size() != d) {
    throw Error(errc::kParse, "standardization width does not match the feature list");
  }
  return j;
}

std::string_view kernel_name(KernelType t) { return t == KernelType::kLinear ? "linear" : "rbf"; }

}  // namespace

std::string serialize_model(const SvmArtifact& a) {
  const SvmModel& m = a.model;
  Json j = header("svm", a.feature_names, a.standardization);
  j["kernel"] = {{"type", kernel_name(m.kernel.type)}, {"gamma", m.kernel.gamma}};
  j["c"] = m.c;
  j["dimension"] = m.dimension;
  j["bias"] = m.bias;
  j["platt"] = {{"a", m.platt.a}, {"b", m.platt.b}};
  j["iterations"] = m.iterations;
  j["dual_coeffs"] = m.dual_coeffs;
  j["support_vectors"] = matrix_json(m.support_vectors);
  return j.dump() + "\n";
}

std::string serialize_model(const KMeansArtifact& a) {
  const KMeansModel& m = a.model;
  Json j = header("kmeans", a.feature_names, a.standardization);
  j["seed"] = m.seed;
  j["objective"] = m.objective;
  j["iterations"] = m.iterations;
  std::vector<std::string> map;
  for (Label l : m.cluster_to_label) map.emplace_back(to_string(l));
  j["cluster_to_label"] = map;
  j["centroids"] = matrix_json(m.centroids);
  return j.dump() + "\n";
}

SvmArtifact parse_svm_model(std::string_view document) {
  SvmArtifact a;
  const Json j = read_header(document, "svm", a);
  SvmModel& m = a.model;
  try {
    const auto type = j.at("kernel").at("type").get<std::string>();
    if (type == "linear") m.kernel.type = KernelType::kLinear;
    else if (type == "rbf") m.kernel.type = KernelType::kRbf;
    else throw Error(errc::kParse, "unknown kernel '" + type + "'");
    m.kernel.gamma = j.at("kernel").at("gamma").get<double>();
    m.c = j.at("c").get<double>();
    m.dimension = j.at("dimension").get<std::size_t>();
    m.bias = j.at("bias").get<double>();
    m.platt.a = j.at("platt").at("a").get<double>();
    m.platt.b = j.at("platt").at("b").get<double>();
    m.iterations = j.at("iterations").get<long>();
    m.dual_coeffs = j.at("dual_coeffs").get<std::vector<double>>();
    m.support_vectors = matrix_from(j.at("support_vectors"), m.dimension);
  } catch (const Json::exception& e) {
    throw Error(errc::kParse, std::string("malformed svm model: ") + e.what());
  }
  if (m.dimension != a.feature_names.size() || m.dual_coeffs.size() != m.support_vectors.rows()) {
    throw Error(errc::kParse, "svm model dimensions are inconsistent");
  }
  return a;
}

KMeansArtifact parse_kmeans_model(std::string_view document) {
  KMeansArtifact a;
  const Json j = read_header(document, "kmeans", a);
  KMeansModel& m = a.model;
  try {
    m.seed = j.at("seed").get<std::uint64_t>();
    m.objective = j.at("objective").get<double>();
    m.iterations = j.at("iterations").get<int>();
    for (const auto& s : j.at("cluster_to_label").get<std::vector<std::string>>()) {
      const auto l = parse_label(s);
      if (!l) throw Error(errc::kParse, "unknown label '" + s + "' in cluster map");
      m.cluster_to_label.push_back(*l);
    }
    m.centroids = matrix_from(j.at("centroids"), a.feature_names.size());
  } catch (const Json::exception& e) {
    throw Error(errc::kParse, std::string("malformed kmeans model: ") + e.what());
  }
  if (m.has_label_map() && m.cluster_to_label.size() != m.centroids.rows()) {
    throw Error(errc::kParse, "cluster map size does not match the centroid count");
  }
  return a;
}

void save_model(const std::filesystem::path& path, const SvmArtifact& a) {
  write_file_atomic(path, serialize_model(a));
}
void save_model(const std::filesystem::path& path, const KMeansArtifact& a) {
  write_file_atomic(path, serialize_model(a));
}
SvmArtifact load_svm_model(const std::filesystem::path& path) { return parse_svm_model(read_file(path)); }
KMeansArtifact load_kmeans_model(const std::filesystem::path& path) {
  return parse_kmeans_model(read_file(path));
}

void require_same_features(std::span<const std::string> model_features,
                           std::span<const std::string> data_features) {
  if (std::equal(model_features.begin(), model_features.end(), data_features.begin(), data_features.end())) return;
  std::string msg = "feature mismatch: model expects [";
  for (std::size_t i = 0; i < model_features.size(); ++i) msg += (i ? "," : "") + model_features[i];
  msg += "] but data has [";
  for (std::size_t i = 0; i < data_features.size(); ++i) msg += (i ? "," : "") + data_features[i];
  throw Error(errc::kFeatureMismatch, msg + "]");
}

}  // namespace botsentinel
