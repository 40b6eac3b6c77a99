#include "pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include <botsentinel/atomic_file.hpp>
#include <botsentinel/conformal.hpp>
#include <botsentinel/csv.hpp>
#include <botsentinel/error.hpp>
#include <botsentinel/feature_matrix.hpp>
#include <botsentinel/importance.hpp>
#include <botsentinel/kmeans.hpp>
#include <botsentinel/metrics.hpp>
#include <botsentinel/model_io.hpp>
#include <botsentinel/semantic_features.hpp>
#include <botsentinel/svm.hpp>
#include <botsentinel/synthgen.hpp>
#include <botsentinel/temporal_features.hpp>
#include <botsentinel/vif.hpp>

namespace botsentinel::cli {
namespace {

using Json = nlohmann::ordered_json;

fs::path in_out(const RunConfig& c, std::string_view name) { return c.out_dir / name; }

// Path of an upstream artifact; throws naming the producing command if absent.
fs::path require(const fs::path& path, std::string_view producer) {
  if (!fs::exists(path)) {
    throw Error(errc::kMissingArtifact,
                path.generic_string() + " not found; run `botsentinel " + std::string(producer) + "` first");
  }
  return path;
}

fs::path require(const RunConfig& c, std::string_view name, std::string_view producer) {
  return require(in_out(c, name), producer);
}

void write_json(const fs::path& path, const Json& j) { write_file_atomic(path, j.dump(2) + "\n"); }

Json read_json(const fs::path& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw Error(errc::kParse, path.generic_string() + " is not valid JSON: " + e.what());
  }
}

// JSON has no infinity; VIF sentinels are written as the string "inf".
Json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return nullptr;
  return v;
}

std::uint64_t seed_of(const RunConfig& c) {
  if (!c.seed) throw Error(errc::kInvalidArgument, "a seed is required");
  return *c.seed;
}

FeatureMatrix load_features(const fs::path& path) { return parse_feature_csv(read_file(path)); }

struct Split {
  std::vector<std::string> train, calibration, test;
};

Split load_split(const RunConfig& c) {
  const Json j = read_json(require(c, artifact::kSplit, "select"));
  try {
    return {j.at("train").get<std::vector<std::string>>(), j.at("calibration").get<std::vector<std::string>>(),
            j.at("test").get<std::vector<std::string>>()};
  } catch (const Json::exception& e) {
    throw Error(errc::kParse, std::string("malformed split.json: ") + e.what());
  }
}

// Labeled rows of the given users.
FeatureMatrix part(const FeatureMatrix& all, const std::vector<std::string>& ids) {
  return labeled_only(select_users(all, ids));
}

SvmOptions svm_options(const RunConfig& c) {
  SvmOptions o;
  o.c = c.c;
  o.kernel.type = c.kernel;
  o.kernel.gamma = c.gamma;
  o.seed = seed_of(c);
  return o;
}

std::vector<std::string_view> label_names(std::span<const Label> labels) {
  std::vector<std::string_view> out;
  for (Label l : labels) out.push_back(to_string(l));
  return out;
}

Json confusion_json(const ConfusionMatrix& m) {
  // Rows are predictions, columns the reference labels.
  Json j;
  j["labels"] = {to_string(Label::kOrganic), to_string(Label::kInorganic)};
  j["predicted_by_actual"] = {{m.cells[0][0], m.cells[0][1]}, {m.cells[1][0], m.cells[1][1]}};
  return j;
}

Json eval_json(const EvalReport& r) {
  Json j;
  j["positive_class"] = to_string(r.positive_class);
  j["confusion_matrix"] = confusion_json(r.confusion);
  j["accuracy"] = r.accuracy;
  j["accuracy_95ci"] = {r.accuracy_ci_low, r.accuracy_ci_high};
  j["no_information_rate"] = r.nir;
  j["p_value_acc_gt_nir"] = r.acc_vs_nir_pvalue;
  j["kappa"] = r.kappa;
  j["mcnemar_p_value"] = r.mcnemar_pvalue;
  j["sensitivity"] = r.sensitivity;
  j["specificity"] = r.specificity;
  j["pos_pred_value"] = r.ppv;
  j["neg_pred_value"] = r.npv;
  j["prevalence"] = r.prevalence;
  j["detection_rate"] = r.detection_rate;
  j["detection_prevalence"] = r.detection_prevalence;
  j["balanced_accuracy"] = r.balanced_accuracy;
  j["f_score"] = r.f_score;
  j["auc"] = r.auc ? Json(*r.auc) : Json(nullptr);
  return j;
}

std::string roc_csv(const std::vector<RocPoint>& points) {
  std::string out = "fpr,tpr,threshold\r\n";
  for (const auto& p : points) {
    out += csv::format_double(p.fpr) + "," + csv::format_double(p.tpr) + "," + csv::format_double(p.threshold) + "\r\n";
  }
  return out;
}

// Positive when the row sits closer to an organic-mapped centroid.
double kmeans_score(const KMeansModel& m, std::span<const double> row) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  double d_org = inf, d_inorg = inf;
  for (std::size_t k = 0; k < m.centroids.rows(); ++k) {
    const double d = squared_distance(row, m.centroids.row(k));
    double& slot = m.cluster_to_label.at(k) == Label::kOrganic ? d_org : d_inorg;
    slot = std::min(slot, d);
  }
  if (std::isinf(d_org) || std::isinf(d_inorg)) return kmeans_predict(m, row) == Label::kOrganic ? 1.0 : -1.0;
  return d_inorg - d_org;
}

struct Prepared {
  FeatureMatrix train;  // standardized with the model's statistics
  FeatureMatrix calibration;
  FeatureMatrix test;
};

Prepared prepare(const RunConfig& c, const std::vector<std::string>& model_features, const Standardization& stats) {
  const FeatureMatrix all = load_features(require(c, artifact::kSelectedFeatures, "select"));
  require_same_features(model_features, all.feature_names);
  const Split s = load_split(c);
  return {standardize_with(part(all, s.train), stats), standardize_with(part(all, s.calibration), stats),
          standardize_with(part(all, s.test), stats)};
}

std::vector<SentimentLexicon> load_lexicons(const RunConfig& c) {
  static constexpr std::array<const char*, 3> names{"afinn", "bing", "nrc"};
  std::vector<SentimentLexicon> out;
  for (std::size_t i = 0; i < 3; ++i) {
    if (!fs::exists(c.lexicons[i])) throw Error(errc::kIo, "lexicon not found: " + c.lexicons[i].generic_string());
    out.push_back(load_lexicon(c.lexicons[i], names[i]));
  }
  return out;
}

}  // namespace

std::string error_line(std::string_view command, std::string_view code, std::string_view message) {
  Json j;
  j["error"] = code;
  j["command"] = command;
  j["message"] = message;
  return j.dump();
}

void cmd_synth(const RunConfig& c) {
  const GeneratorProfiles profiles = c.profiles ? load_profiles(*c.profiles) : GeneratorProfiles{};
  const auto corpus = generate_corpus(c.n_organic, c.n_inorganic, seed_of(c), profiles);
  save_corpus(c.corpus_path(), corpus);
}

void cmd_extract(const RunConfig& c) {
  const fs::path corpus_path = require(c.corpus_path(), "synth");
  const auto lexicons = load_lexicons(c);
  const CorpusLoadResult loaded = load_corpus(corpus_path);

  TemporalOptions topt;
  topt.bin_width = c.bin_width;
  topt.max_p = c.max_p;
  topt.max_q = c.max_q;

  std::map<std::string, TemporalFeatures> temporal;
  std::map<std::string, SemanticFeatures> semantic;
  std::map<std::string, std::optional<Label>> labels;
  Json excluded = Json::array();
  for (const auto& h : loaded.histories) {
    if (h.tweets.size() < kMinTweetsForFeatures) {
      excluded.push_back({{"user_id", h.user_id},
                          {"reason", "fewer than " + std::to_string(kMinTweetsForFeatures) + " tweets"}});
      continue;
    }
    try {
      temporal[h.user_id] = temporal_features(h, topt);
    } catch (const Error& e) {
      excluded.push_back({{"user_id", h.user_id}, {"reason", e.what()}});
      continue;
    }
    semantic[h.user_id] = semantic_features(h, lexicons);
    labels[h.user_id] = h.label;
  }
  if (temporal.empty()) throw Error(errc::kInsufficientData, "no user in the corpus qualifies for feature extraction");
  const FeatureMatrix m = assemble_matrix(temporal, semantic, labels);

  Json report;
  report["corpus"] = corpus_path.generic_string();
  report["users_read"] = loaded.histories.size();
  report["skipped_empty"] = loaded.skipped_empty;
  report["users_extracted"] = m.rows();
  report["excluded"] = excluded;
  report["bin_width"] = c.bin_width;
  report["lexicons"] = Json::array();
  for (std::size_t i = 0; i < 3; ++i) {
    report["lexicons"].push_back({{"name", lexicons[i].name},
                                  {"path", c.lexicons[i].generic_string()},
                                  {"entries", lexicons[i].scores.size()}});
  }
  report["feature_names"] = m.feature_names;
  write_file_atomic(in_out(c, artifact::kFeatures), to_csv(m));
  write_json(in_out(c, artifact::kExtractionReport), report);
}

void cmd_select(const RunConfig& c) {
  const FeatureMatrix all = load_features(require(c, artifact::kFeatures, "extract"));
  std::vector<LabeledId> ids;
  for (std::size_t i = 0; i < all.rows(); ++i) ids.push_back({all.user_ids[i], all.labels[i]});
  const DatasetSplit split = split_dataset(ids, c.split, seed_of(c));

  const FeatureMatrix train = part(all, split.train);
  const VifReport vr = select_by_vif(train, c.vif_threshold);

  Json sj;
  sj["seed"] = seed_of(c);
  sj["fractions"] = {{"train", c.split.train}, {"calibration", c.split.calibration}, {"test", c.split.test}};
  sj["train"] = split.train;
  sj["calibration"] = split.calibration;
  sj["test"] = split.test;

  Json vj;
  vj["threshold"] = vr.threshold;
  vj["fitted_on"] = "train";
  vj["n_rows"] = train.rows();
  vj["constant_features"] = vr.constant_features;
  vj["elimination_trace"] = Json::array();
  for (const auto& [name, v] : vr.elimination_trace) vj["elimination_trace"].push_back({{"feature", name}, {"vif", number(v)}});
  vj["retained"] = vr.retained;
  vj["final_vifs"] = Json::object();
  for (const auto& name : vr.retained) vj["final_vifs"][name] = number(vr.final_vifs.at(name));
  vj["unresolvable"] = vr.unresolvable;

  write_json(in_out(c, artifact::kSplit), sj);
  write_json(in_out(c, artifact::kVifReport), vj);
  write_file_atomic(in_out(c, artifact::kSelectedFeatures), to_csv(select_features(all, vr.retained)));
}

void cmd_train(const RunConfig& c) {
  const FeatureMatrix all = load_features(require(c, artifact::kSelectedFeatures, "select"));
  const Split s = load_split(c);
  const FeatureMatrix train = standardize(part(all, s.train));
  const auto labels = labels_of(train);

  KMeansOptions ko;
  ko.seed = seed_of(c);
  ko.restarts = c.kmeans_restarts;
  const KMeansArtifact km{train.feature_names, *train.standardization, kmeans_fit(train.values, labels, ko)};
  const SvmArtifact svm{train.feature_names, *train.standardization, svm_fit(train.values, labels, svm_options(c))};

  save_model(in_out(c, artifact::kKMeansModel), km);
  save_model(in_out(c, artifact::kSvmModel), svm);
}

void cmd_evaluate(const RunConfig& c) {
  const SvmArtifact svm = load_svm_model(require(c, artifact::kSvmModel, "train"));
  const KMeansArtifact km = load_kmeans_model(require(c, artifact::kKMeansModel, "train"));
  require_same_features(svm.feature_names, km.feature_names);
  const Prepared p = prepare(c, svm.feature_names, svm.standardization);
  const auto truth = labels_of(p.test);
  if (truth.empty()) throw Error(errc::kInsufficientData, "the test split has no labeled users");

  std::vector<Label> svm_pred, km_pred;
  std::vector<double> svm_score, km_score;
  for (std::size_t i = 0; i < p.test.rows(); ++i) {
    const auto row = p.test.values.row(i);
    svm_score.push_back(svm_decision(svm.model, row));
    svm_pred.push_back(svm_predict(svm.model, row));
    km_score.push_back(kmeans_score(km.model, row));
    km_pred.push_back(kmeans_predict(km.model, row));
  }
  const EvalReport sr = evaluate(svm_pred, svm_score, truth);
  const EvalReport kr = evaluate(km_pred, km_score, truth);

  Json j;
  j["n_test"] = truth.size();
  j["features"] = svm.feature_names;
  j["svm"] = eval_json(sr);
  j["kmeans"] = eval_json(kr);
  write_json(in_out(c, artifact::kEvaluation), j);
  write_file_atomic(in_out(c, artifact::kRocSvm), roc_csv(sr.roc_points));
  write_file_atomic(in_out(c, artifact::kRocKMeans), roc_csv(kr.roc_points));
}

void cmd_conformal(const RunConfig& c) {
  const SvmArtifact svm = load_svm_model(require(c, artifact::kSvmModel, "train"));
  const Prepared p = prepare(c, svm.feature_names, svm.standardization);
  const auto cal_labels = labels_of(p.calibration);
  const auto truth = labels_of(p.test);
  if (truth.empty()) throw Error(errc::kInsufficientData, "the test split has no labeled users");

  const ProbabilityFn model = [&](std::span<const double> row, Label y) { return svm_probability(svm.model, row, y); };
  const ConformalCalibration cal = calibrate(model, p.calibration.values, cal_labels, c.alpha);

  std::vector<PredictionSet> sets;
  std::vector<Label> forced;
  std::vector<double> scores;
  Json rows = Json::array();
  for (std::size_t i = 0; i < p.test.rows(); ++i) {
    sets.push_back(prediction_set(model, p.test.values.row(i), cal));
    const PredictionSet& s = sets.back();
    forced.push_back(forced_label(s));
    scores.push_back(s.p_value_of(Label::kOrganic) - s.p_value_of(Label::kInorganic));
    Json r;
    r["user_id"] = p.test.user_ids[i];
    r["p_organic"] = s.p_value_of(Label::kOrganic);
    r["p_inorganic"] = s.p_value_of(Label::kInorganic);
    r["set"] = label_names(s.members);
    r["covered"] = s.contains(truth[i]);
    rows.push_back(std::move(r));
  }
  const CoverageReport cov = coverage_report(sets, truth);

  Json j;
  j["alpha"] = c.alpha;
  j["n_calibration"] = cal.scores.size();
  j["n_test"] = truth.size();
  j["summary"] = {{"empirical_coverage", cov.empirical_coverage},
                  {"mean_set_size", cov.mean_set_size},
                  {"set_size_histogram", cov.size_histogram},
                  {"pvalue_histogram", cov.pvalue_histogram},
                  {"pvalue_chi_square", uniformity_chi_square(cov.pvalue_histogram)}};
  j["forced_label_rule"] = "argmax p-value, ties to organic";
  j["forced_evaluation"] = eval_json(evaluate(forced, scores, truth));
  j["rows"] = rows;

  std::string ph = "bin_low,bin_high,count\r\n";
  for (std::size_t b = 0; b < kPValueBins; ++b) {
    ph += csv::format_double(static_cast<double>(b) / kPValueBins) + "," +
          csv::format_double(static_cast<double>(b + 1) / kPValueBins) + "," +
          std::to_string(cov.pvalue_histogram[b]) + "\r\n";
  }
  std::string sh = "set_size,count\r\n";
  for (std::size_t k = 0; k < cov.size_histogram.size(); ++k) {
    sh += std::to_string(k) + "," + std::to_string(cov.size_histogram[k]) + "\r\n";
  }
  write_json(in_out(c, artifact::kConformal), j);
  write_file_atomic(in_out(c, artifact::kPValueHistogram), ph);
  write_file_atomic(in_out(c, artifact::kSetSizeHistogram), sh);
}

void cmd_importance(const RunConfig& c) {
  const FeatureMatrix all = load_features(require(c, artifact::kSelectedFeatures, "select"));
  const Split s = load_split(c);
  const FeatureMatrix train = standardize(part(all, s.train));
  const FeatureMatrix test = standardize_with(part(all, s.test), *train.standardization);
  const auto train_labels = labels_of(train);
  const auto test_labels = labels_of(test);
  if (test_labels.empty()) throw Error(errc::kInsufficientData, "the test split has no labeled users");

  SvmOptions so = svm_options(c);
  const ImportanceReport svm = accuracy_scores(svm_trainer(so), train.values, train_labels, test.values,
                                               test_labels, train.feature_names, seed_of(c));
  const ImportanceReport km = accuracy_scores(kmeans_trainer(), train.values, train_labels, test.values,
                                              test_labels, train.feature_names, seed_of(c));

  const auto summary = [](const ImportanceReport& r) {
    Json j;
    j["baseline_accuracy"] = r.baseline_accuracy;
    j["degenerate"] = r.degenerate;
    j["ranking"] = Json::array();
    for (const auto& name : r.ranking()) {
      const auto& f = r.per_feature.at(name);
      j["ranking"].push_back({{"feature", name}, {"accuracy_without", f.accuracy_without}, {"accuracy_score", f.accuracy_score}});
    }
    return j;
  };
  Json j;
  j["evaluated_on"] = "test";
  j["svm"] = summary(svm);
  j["kmeans"] = summary(km);
  write_json(in_out(c, artifact::kImportance), j);
  write_file_atomic(in_out(c, artifact::kImportanceSvm), importance_csv(svm));
  write_file_atomic(in_out(c, artifact::kImportanceKMeans), importance_csv(km));
}

void cmd_report(const RunConfig& c) {
  const Json extraction = read_json(require(c, artifact::kExtractionReport, "extract"));
  const Json vif_report = read_json(require(c, artifact::kVifReport, "select"));
  const Json split = read_json(require(c, artifact::kSplit, "select"));
  const Json evaluation = read_json(require(c, artifact::kEvaluation, "evaluate"));
  Json conformal = read_json(require(c, artifact::kConformal, "conformal"));
  const Json importance = read_json(require(c, artifact::kImportance, "importance"));
  require(c, artifact::kSvmModel, "train");
  require(c, artifact::kKMeansModel, "train");

  conformal.erase("rows");
  Json extraction_summary = extraction;
  extraction_summary["excluded"] = extraction.at("excluded").size();

  Json j;
  j["tool"] = "botsentinel";
  j["seed"] = seed_of(c);
  j["config"] = to_json(c);
  j["split_sizes"] = {{"train", split.at("train").size()},
                      {"calibration", split.at("calibration").size()},
                      {"test", split.at("test").size()}};
  j["extraction"] = extraction_summary;
  j["feature_selection"] = vif_report;
  j["evaluation"] = evaluation;
  j["conformal"] = conformal;
  j["importance"] = importance;
  j["artifacts"] = {artifact::kFeatures, artifact::kSelectedFeatures, artifact::kKMeansModel, artifact::kSvmModel,
                    artifact::kRocSvm, artifact::kRocKMeans, artifact::kPValueHistogram,
                    artifact::kSetSizeHistogram, artifact::kImportanceSvm, artifact::kImportanceKMeans};
  write_json(in_out(c, artifact::kReport), j);
}

void cmd_run(const RunConfig& c) {
  if (!c.corpus) cmd_synth(c);
  cmd_extract(c);
  cmd_select(c);
  cmd_train(c);
  cmd_evaluate(c);
  cmd_conformal(c);
  cmd_importance(c);
  cmd_report(c);
}

}  // namespace botsentinel::cli
