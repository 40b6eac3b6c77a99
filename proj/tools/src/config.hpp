#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include <botsentinel/corpus.hpp>
#include <botsentinel/svm.hpp>

namespace botsentinel::cli {

namespace fs = std::filesystem;

struct RunConfig {
  std::optional<std::uint64_t> seed;  // mandatory at validation time
  fs::path out_dir = "out";
  std::optional<fs::path> corpus;     // defaults to <out>/corpus.jsonl
  std::array<fs::path, 3> lexicons;
  std::optional<fs::path> profiles;
  std::size_t n_organic = 470;
  std::size_t n_inorganic = 373;
  std::int64_t bin_width = kDefaultBinWidth;
  int max_p = 3;
  int max_q = 3;
  double vif_threshold = 5.0;
  KernelType kernel = KernelType::kRbf;
  double c = 1.0;
  double gamma = 0.0;  // 0: derived from the training rows
  double alpha = 0.1;
  SplitFractions split;
  int kmeans_restarts = 10;

  fs::path corpus_path() const { return corpus ? *corpus : out_dir / "corpus.jsonl"; }
};

// Built-in defaults, with lexicon paths under the given data directory.
RunConfig default_config(const fs::path& data_dir);

// Overlays the keys present in a JSON config document.
void apply_config_json(RunConfig& config, const nlohmann::json& document);
void apply_config_file(RunConfig& config, const fs::path& path);

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
EnvLookup process_env();
// BOTSENTINEL_SEED, _OUT, _CORPUS, _ALPHA, _VIF_THRESHOLD, _BIN_WIDTH, _KERNEL, _C, _GAMMA.
void apply_env(RunConfig& config, const EnvLookup& env);

// Checks ranges and the presence of the seed; throws Error(invalid_argument).
void validate(const RunConfig& config);

nlohmann::ordered_json to_json(const RunConfig& config);

KernelType parse_kernel(const std::string& name);
std::string kernel_name(KernelType kernel);

}  // namespace botsentinel::cli
