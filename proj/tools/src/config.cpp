#include "config.hpp"

#include <cmath>
#include <cstdlib>

#include <botsentinel/atomic_file.hpp>
#include <botsentinel/csv.hpp>
#include <botsentinel/error.hpp>

namespace botsentinel::cli {
namespace {

std::uint64_t parse_seed(const std::string& text) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    if (!text.empty() && text[0] == '-') throw std::invalid_argument("negative");
    v = std::stoull(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != text.size()) throw Error(errc::kInvalidArgument, "seed must be a non-negative integer, got '" + text + "'");
  return v;
}

double parse_number(const std::string& name, const std::string& text) {
  try {
    return csv::parse_double(text);
  } catch (const Error&) {
    throw Error(errc::kInvalidArgument, name + " must be a number, got '" + text + "'");
  }
}

template <class T>
void read_key(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

KernelType parse_kernel(const std::string& name) {
  if (name == "rbf") return KernelType::kRbf;
  if (name == "linear") return KernelType::kLinear;
  throw Error(errc::kInvalidArgument, "kernel must be 'linear' or 'rbf', got '" + name + "'");
}

std::string kernel_name(KernelType kernel) { return kernel == KernelType::kLinear ? "linear" : "rbf"; }

RunConfig default_config(const fs::path& data_dir) {
  RunConfig c;
  c.lexicons = {data_dir / "lexicons" / "afinn_demo.tsv", data_dir / "lexicons" / "bing_demo.tsv",
                data_dir / "lexicons" / "nrc_demo.tsv"};
  return c;
}

void apply_config_json(RunConfig& c, const nlohmann::json& j) {
  if (!j.is_object()) throw Error(errc::kParse, "config must be a JSON object");
  try {
    if (j.contains("seed")) {
      const auto& s = j.at("seed");
      c.seed = s.is_string() ? parse_seed(s.get<std::string>()) : s.get<std::uint64_t>();
    }
    if (j.contains("out")) c.out_dir = j.at("out").get<std::string>();
    if (j.contains("corpus")) c.corpus = fs::path(j.at("corpus").get<std::string>());
    if (j.contains("profiles")) c.profiles = fs::path(j.at("profiles").get<std::string>());
    if (j.contains("lexicons")) {
      const auto paths = j.at("lexicons").get<std::vector<std::string>>();
      if (paths.size() != 3) throw Error(errc::kInvalidArgument, "config 'lexicons' needs exactly three paths");
      for (std::size_t i = 0; i < 3; ++i) c.lexicons[i] = paths[i];
    }
    read_key(j, "n_organic", c.n_organic);
    read_key(j, "n_inorganic", c.n_inorganic);
    read_key(j, "bin_width", c.bin_width);
    read_key(j, "max_p", c.max_p);
    read_key(j, "max_q", c.max_q);
    read_key(j, "vif_threshold", c.vif_threshold);
    read_key(j, "alpha", c.alpha);
    read_key(j, "kmeans_restarts", c.kmeans_restarts);
    if (j.contains("svm")) {
      const auto& s = j.at("svm");
      if (s.contains("kernel")) c.kernel = parse_kernel(s.at("kernel").get<std::string>());
      read_key(s, "c", c.c);
      read_key(s, "gamma", c.gamma);
    }
    if (j.contains("split")) {
      const auto& s = j.at("split");
      read_key(s, "train", c.split.train);
      read_key(s, "calibration", c.split.calibration);
      read_key(s, "test", c.split.test);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(errc::kParse, std::string("bad config value: ") + e.what());
  }
}

void apply_config_file(RunConfig& config, const fs::path& path) {
  if (!fs::exists(path)) throw Error(errc::kIo, "config file not found: " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(errc::kParse, "config " + path.string() + " is not valid JSON: " + e.what());
  }
  apply_config_json(config, j);
}

EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    if (const char* v = std::getenv(name.c_str()); v != nullptr && *v != '\0') return std::string(v);
    return std::nullopt;
  };
}

void apply_env(RunConfig& c, const EnvLookup& env) {
  if (auto v = env("BOTSENTINEL_SEED")) c.seed = parse_seed(*v);
  if (auto v = env("BOTSENTINEL_OUT")) c.out_dir = *v;
  if (auto v = env("BOTSENTINEL_CORPUS")) c.corpus = fs::path(*v);
  if (auto v = env("BOTSENTINEL_ALPHA")) c.alpha = parse_number("BOTSENTINEL_ALPHA", *v);
  if (auto v = env("BOTSENTINEL_VIF_THRESHOLD")) c.vif_threshold = parse_number("BOTSENTINEL_VIF_THRESHOLD", *v);
  if (auto v = env("BOTSENTINEL_BIN_WIDTH")) {
    const double w = parse_number("BOTSENTINEL_BIN_WIDTH", *v);
    if (w != std::floor(w)) throw Error(errc::kInvalidArgument, "BOTSENTINEL_BIN_WIDTH must be an integer");
    c.bin_width = static_cast<std::int64_t>(w);
  }
  if (auto v = env("BOTSENTINEL_KERNEL")) c.kernel = parse_kernel(*v);
  if (auto v = env("BOTSENTINEL_C")) c.c = parse_number("BOTSENTINEL_C", *v);
  if (auto v = env("BOTSENTINEL_GAMMA")) c.gamma = parse_number("BOTSENTINEL_GAMMA", *v);
}

void validate(const RunConfig& c) {
  const auto bad = [](const std::string& msg) { throw Error(errc::kInvalidArgument, msg); };
  if (!c.seed) bad("a seed is required (--seed, BOTSENTINEL_SEED or config 'seed')");
  if (c.bin_width <= 0) bad("bin width must be positive");
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) bad("alpha must lie in (0,1)");
  if (!(c.vif_threshold > 1.0)) bad("VIF threshold must exceed 1");
  if (!(c.c > 0.0) || !std::isfinite(c.c)) bad("C must be positive");
  if (!(c.gamma >= 0.0) || !std::isfinite(c.gamma)) bad("gamma must be non-negative");
  if (c.max_p < 0 || c.max_p > 3 || c.max_q < 0 || c.max_q > 3) bad("max_p and max_q must lie in [0,3]");
  if (c.kmeans_restarts < 1) bad("kmeans_restarts must be at least 1");
  const double s = c.split.train + c.split.calibration + c.split.test;
  if (c.split.train <= 0 || c.split.calibration <= 0 || c.split.test <= 0 || std::abs(s - 1.0) > 1e-9) {
    bad("split fractions must be positive and sum to 1");
  }
}

nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["seed"] = c.seed ? nlohmann::ordered_json(*c.seed) : nlohmann::ordered_json(nullptr);
  j["out"] = c.out_dir.generic_string();
  j["corpus"] = c.corpus_path().generic_string();
  j["lexicons"] = {c.lexicons[0].generic_string(), c.lexicons[1].generic_string(), c.lexicons[2].generic_string()};
  j["profiles"] = c.profiles ? nlohmann::ordered_json(c.profiles->generic_string()) : nlohmann::ordered_json(nullptr);
  j["n_organic"] = c.n_organic;
  j["n_inorganic"] = c.n_inorganic;
  j["bin_width"] = c.bin_width;
  j["max_p"] = c.max_p;
  j["max_q"] = c.max_q;
  j["vif_threshold"] = c.vif_threshold;
  j["svm"] = {{"kernel", kernel_name(c.kernel)}, {"c", c.c}, {"gamma", c.gamma}};
  j["alpha"] = c.alpha;
  j["split"] = {{"train", c.split.train}, {"calibration", c.split.calibration}, {"test", c.split.test}};
  j["kmeans_restarts"] = c.kmeans_restarts;
  return j;
}

}  // namespace botsentinel::cli
