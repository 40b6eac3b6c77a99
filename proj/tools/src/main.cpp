#include <cstdlib>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include <botsentinel/error.hpp>

#include "config.hpp"
#include "pipeline.hpp"

#ifndef BOTSENTINEL_DATA_DIR
#define BOTSENTINEL_DATA_DIR "data"
#endif

namespace {

using namespace botsentinel;
using namespace botsentinel::cli;

struct Flags {
  std::string config;
  std::string seed;
  std::optional<double> alpha, vif_threshold, c, gamma;
  std::optional<std::int64_t> bin_width;
  std::optional<std::string> kernel, out, corpus, profiles;
  std::optional<std::size_t> n_organic, n_inorganic;
};

RunConfig resolve(const Flags& f) {
  RunConfig config = default_config(BOTSENTINEL_DATA_DIR);
  const EnvLookup env = process_env();
  std::string config_path = f.config;
  if (config_path.empty()) config_path = env("BOTSENTINEL_CONFIG").value_or("");
  if (!config_path.empty()) apply_config_file(config, config_path);
  apply_env(config, env);

  if (!f.seed.empty()) {
    nlohmann::json j;
    j["seed"] = f.seed;
    apply_config_json(config, j);
  }
  if (f.alpha) config.alpha = *f.alpha;
  if (f.vif_threshold) config.vif_threshold = *f.vif_threshold;
  if (f.c) config.c = *f.c;
  if (f.gamma) config.gamma = *f.gamma;
  if (f.bin_width) config.bin_width = *f.bin_width;
  if (f.kernel) config.kernel = parse_kernel(*f.kernel);
  if (f.out) config.out_dir = *f.out;
  if (f.corpus) config.corpus = fs::path(*f.corpus);
  if (f.profiles) config.profiles = fs::path(*f.profiles);
  if (f.n_organic) config.n_organic = *f.n_organic;
  if (f.n_inorganic) config.n_inorganic = *f.n_inorganic;
  validate(config);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporal and semantic bot detection with conformal uncertainty"};
  app.require_subcommand(1);
  Flags flags;

  app.add_option("--config", flags.config, "JSON config file");
  app.add_option("--seed", flags.seed, "random seed (required)");
  app.add_option("--alpha", flags.alpha, "conformal miscoverage level");
  app.add_option("--vif-threshold", flags.vif_threshold, "VIF elimination threshold");
  app.add_option("--bin-width", flags.bin_width, "time bin width in seconds");
  app.add_option("--kernel", flags.kernel, "SVM kernel")->check(CLI::IsMember({"linear", "rbf"}));
  app.add_option("--c", flags.c, "SVM soft-margin penalty");
  app.add_option("--gamma", flags.gamma, "RBF gamma (0 derives it from the data)");
  app.add_option("--out", flags.out, "output directory");
  app.add_option("--corpus", flags.corpus, "corpus JSONL (default <out>/corpus.jsonl)");
  app.add_option("--profiles", flags.profiles, "generator profile file");
  app.add_option("--n-organic", flags.n_organic, "organic users to generate");
  app.add_option("--n-inorganic", flags.n_inorganic, "inorganic users to generate");
  app.fallthrough();

  const std::map<std::string, std::pair<std::string, void (*)(const RunConfig&)>> commands{
      {"synth", {"generate a synthetic corpus", cmd_synth}},
      {"extract", {"compute per-user features", cmd_extract}},
      {"select", {"split users and select features by VIF", cmd_select}},
      {"train", {"fit k-means and SVM models", cmd_train}},
      {"evaluate", {"score both models on the test split", cmd_evaluate}},
      {"conformal", {"calibrate and emit prediction sets", cmd_conformal}},
      {"importance", {"leave-one-feature-out accuracy scores", cmd_importance}},
      {"report", {"consolidate every artifact into report.json", cmd_report}},
      {"run", {"every stage in order", cmd_run}},
  };
  for (const auto& [name, entry] : commands) app.add_subcommand(name, entry.first);

  std::string command = "botsentinel";
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << error_line(command, "usage_error", e.what()) << '\n';
    return 2;
  }

  try {
    for (const auto& [name, entry] : commands) {
      if (app.got_subcommand(name)) {
        command = name;
        entry.second(resolve(flags));
      }
    }
  } catch (const Error& e) {
    std::cerr << error_line(command, e.code(), e.what()) << '\n';
    return e.code() == errc::kInvalidArgument ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << error_line(command, "internal_error", e.what()) << '\n';
    return 1;
  }
  return EXIT_SUCCESS;
}
