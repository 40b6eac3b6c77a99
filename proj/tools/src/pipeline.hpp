#pragma once

#include <string>
#include <string_view>

#include "config.hpp"

namespace botsentinel::cli {

// Artifact file names inside the output directory.
namespace artifact {
inline constexpr std::string_view kCorpus = "corpus.jsonl";
inline constexpr std::string_view kFeatures = "features.csv";
inline constexpr std::string_view kExtractionReport = "extraction_report.json";
inline constexpr std::string_view kSplit = "split.json";
inline constexpr std::string_view kVifReport = "vif_report.json";
inline constexpr std::string_view kSelectedFeatures = "selected_features.csv";
inline constexpr std::string_view kKMeansModel = "model_kmeans.json";
inline constexpr std::string_view kSvmModel = "model_svm.json";
inline constexpr std::string_view kEvaluation = "evaluation.json";
inline constexpr std::string_view kRocSvm = "roc_svm.csv";
inline constexpr std::string_view kRocKMeans = "roc_kmeans.csv";
inline constexpr std::string_view kConformal = "conformal.json";
inline constexpr std::string_view kPValueHistogram = "pvalue_histogram.csv";
inline constexpr std::string_view kSetSizeHistogram = "set_size_histogram.csv";
inline constexpr std::string_view kImportance = "importance.json";
inline constexpr std::string_view kImportanceSvm = "importance_svm.csv";
inline constexpr std::string_view kImportanceKMeans = "importance_kmeans.csv";
inline constexpr std::string_view kReport = "report.json";
}  // namespace artifact

// Each stage reads its inputs from the output directory (the corpus may live
// elsewhere) and writes its artifacts atomically. A missing input raises
// Error(missing_artifact) naming the command that produces it.
void cmd_synth(const RunConfig& config);
void cmd_extract(const RunConfig& config);
void cmd_select(const RunConfig& config);
void cmd_train(const RunConfig& config);
void cmd_evaluate(const RunConfig& config);
void cmd_conformal(const RunConfig& config);
void cmd_importance(const RunConfig& config);
void cmd_report(const RunConfig& config);
// synth (unless an external corpus is configured) through report.
void cmd_run(const RunConfig& config);

// Single-line JSON error record printed on stderr.
std::string error_line(std::string_view command, std::string_view code, std::string_view message);

}  // namespace botsentinel::cli
