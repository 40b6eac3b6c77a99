#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace botsentinel {

// Organic is the positive class and is coded 0.
enum class Label : std::uint8_t { kOrganic = 0, kInorganic = 1 };

std::string_view to_string(Label label) noexcept;
std::optional<Label> parse_label(std::string_view text) noexcept;

struct Tweet {
  std::int64_t timestamp = 0;  // seconds since the Unix epoch, UTC
  std::string text;

  friend bool operator==(const Tweet&, const Tweet&) = default;
};

struct UserHistory {
  std::string user_id;
  std::vector<Tweet> tweets;  // ascending by timestamp
  std::optional<Label> label;

  friend bool operator==(const UserHistory&, const UserHistory&) = default;
};

struct CorpusLoadResult {
  std::vector<UserHistory> histories;
  std::size_t skipped_empty = 0;  // records dropped because they had no tweets
};

// Reads newline-delimited JSON, one user per line. Blank lines are ignored.
// Throws Error(parse_error) naming the 1-based line on malformed input and
// Error(duplicate_id) when a user_id repeats.
CorpusLoadResult load_corpus(const std::filesystem::path& path);
CorpusLoadResult parse_corpus(std::istream& in);

// Canonical single-line JSON encoding of one history (no trailing newline).
std::string serialize_history(const UserHistory& history);
void write_corpus(std::ostream& out, std::span<const UserHistory> histories);
void save_corpus(const std::filesystem::path& path, std::span<const UserHistory> histories);

inline constexpr std::int64_t kDefaultBinWidth = 10800;  // 3 hours

struct BinnedSeries {
  std::int64_t start = 0;  // multiple of bin_width
  std::int64_t bin_width = kDefaultBinWidth;
  std::vector<std::int64_t> counts;
};

// Tweet counts per window. Windows are anchored at multiples of bin_width so
// that different users' series are phase-aligned.
BinnedSeries bin_series(const UserHistory& history, std::int64_t bin_width = kDefaultBinWidth);

struct SplitFractions {
  double train = 0.4;
  double calibration = 0.3;
  double test = 0.3;
};

struct LabeledId {
  std::string user_id;
  std::optional<Label> label;
};

struct DatasetSplit {
  std::vector<std::string> train;
  std::vector<std::string> calibration;
  std::vector<std::string> test;
};

// Stratified by label (unlabeled users form their own stratum). Per-stratum
// sizes use largest-remainder rounding, remainder ties going to train, then
// calibration, then test. Within each part ids are sorted.
DatasetSplit split_dataset(std::span<const LabeledId> users, const SplitFractions& fractions,
                           std::uint64_t seed);
DatasetSplit split_dataset(std::span<const UserHistory> corpus, const SplitFractions& fractions,
                           std::uint64_t seed);

}  // namespace botsentinel
