#include "botsentinel/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "botsentinel/atomic_file.hpp"
#include "botsentinel/error.hpp"

namespace botsentinel {

std::string_view to_string(Label label) noexcept {
  return label == Label::kOrganic ? "organic" : "inorganic";
}

std::optional<Label> parse_label(std::string_view text) noexcept {
  if (text == "organic") return Label::kOrganic;
  if (text == "inorganic") return Label::kInorganic;
  return std::nullopt;
}

namespace {

Error line_error(std::size_t line, const std::string& what) {
  return Error(errc::kParse, "corpus line " + std::to_string(line) + ": " + what);
}

UserHistory parse_record(const nlohmann::json& obj, std::size_t line) {
  if (!obj.is_object()) throw line_error(line, "expected a JSON object");

  UserHistory history;
  auto id = obj.find("user_id");
  if (id == obj.end() || !id->is_string()) throw line_error(line, "missing string field 'user_id'");
  history.user_id = id->get<std::string>();

  auto tweets = obj.find("tweets");
  if (tweets == obj.end() || !tweets->is_array()) {
    throw line_error(line, "missing array field 'tweets'");
  }
  history.tweets.reserve(tweets->size());
  for (const auto& t : *tweets) {
    if (!t.is_object()) throw line_error(line, "tweet entries must be objects");
    auto ts = t.find("t");
    auto text = t.find("text");
    if (ts == t.end() || !ts->is_number_integer()) throw line_error(line, "tweet needs integer 't'");
    if (text == t.end() || !text->is_string()) throw line_error(line, "tweet needs string 'text'");
    const auto stamp = ts->get<std::int64_t>();
    if (stamp < 0) throw line_error(line, "negative timestamp");
    history.tweets.push_back({stamp, text->get<std::string>()});
  }
  std::stable_sort(history.tweets.begin(), history.tweets.end(),
                   [](const Tweet& a, const Tweet& b) { return a.timestamp < b.timestamp; });

  auto label = obj.find("label");
  if (label != obj.end() && !label->is_null()) {
    if (!label->is_string()) throw line_error(line, "label must be a string or null");
    history.label = parse_label(label->get<std::string>());
    if (!history.label) throw line_error(line, "unknown label '" + label->get<std::string>() + "'");
  }
  return history;
}

}  // namespace

CorpusLoadResult parse_corpus(std::istream& in) {
  CorpusLoadResult result;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw line_error(line_no, e.what());
    }
    UserHistory history = parse_record(obj, line_no);
    if (!seen.insert(history.user_id).second) {
      throw Error(errc::kDuplicateId, "corpus line " + std::to_string(line_no) +
                                          ": duplicate user_id '" + history.user_id + "'");
    }
    if (history.tweets.empty()) {
      ++result.skipped_empty;
      continue;
    }
    result.histories.push_back(std::move(history));
  }
  return result;
}

CorpusLoadResult load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(errc::kIo, "cannot open corpus " + path.string());
  return parse_corpus(in);
}

std::string serialize_history(const UserHistory& history) {
  nlohmann::ordered_json obj;
  obj["user_id"] = history.user_id;
  auto tweets = nlohmann::ordered_json::array();
  for (const auto& t : history.tweets) {
    nlohmann::ordered_json tweet;
    tweet["t"] = t.timestamp;
    tweet["text"] = t.text;
    tweets.push_back(std::move(tweet));
  }
  obj["tweets"] = std::move(tweets);
  if (history.label) {
    obj["label"] = std::string(to_string(*history.label));
  } else {
    obj["label"] = nullptr;
  }
  return obj.dump();
}

void write_corpus(std::ostream& out, std::span<const UserHistory> histories) {
  for (const auto& h : histories) out << serialize_history(h) << '\n';
}

void save_corpus(const std::filesystem::path& path, std::span<const UserHistory> histories) {
  std::ostringstream out;
  write_corpus(out, histories);
  write_file_atomic(path, out.str());
}

BinnedSeries bin_series(const UserHistory& history, std::int64_t bin_width) {
  if (bin_width <= 0) throw Error(errc::kInvalidArgument, "bin_width must be positive");
  if (history.tweets.empty()) {
    throw Error(errc::kInsufficientData, "cannot bin empty history '" + history.user_id + "'");
  }
  const auto [lo, hi] = std::minmax_element(
      history.tweets.begin(), history.tweets.end(),
      [](const Tweet& a, const Tweet& b) { return a.timestamp < b.timestamp; });

  BinnedSeries series;
  series.bin_width = bin_width;
  series.start = (lo->timestamp / bin_width) * bin_width;
  const auto n_bins = static_cast<std::size_t>((hi->timestamp - series.start) / bin_width + 1);
  series.counts.assign(n_bins, 0);
  for (const auto& t : history.tweets) {
    ++series.counts[static_cast<std::size_t>((t.timestamp - series.start) / bin_width)];
  }
  return series;
}

namespace {

// Largest-remainder apportionment of `total` items; ties on the fractional
// part favour the earlier slot.
std::array<std::size_t, 3> apportion(std::size_t total, const std::array<double, 3>& fractions) {
  std::array<std::size_t, 3> sizes{};
  std::array<double, 3> remainders{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double quota = fractions[i] * static_cast<double>(total);
    sizes[i] = static_cast<std::size_t>(std::floor(quota + 1e-9));
    remainders[i] = quota - static_cast<double>(sizes[i]);
    assigned += sizes[i];
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b] + 1e-12; });
  for (std::size_t k = 0; assigned < total; ++k, ++assigned) ++sizes[order[k % 3]];
  while (assigned > total) {
    // Only reachable through the 1e-9 floor nudge; trim from the back.
    for (std::size_t i = 3; i-- > 0;) {
      if (sizes[i] > 0) {
        --sizes[i];
        --assigned;
        break;
      }
    }
  }
  return sizes;
}

}  // namespace

DatasetSplit split_dataset(std::span<const LabeledId> users, const SplitFractions& fractions,
                           std::uint64_t seed) {
  const std::array<double, 3> f{fractions.train, fractions.calibration, fractions.test};
  for (double x : f) {
    if (!(x >= 0.0 && x <= 1.0)) throw Error(errc::kInvalidArgument, "split fractions must lie in [0,1]");
  }
  if (std::abs(f[0] + f[1] + f[2] - 1.0) > 1e-9) {
    throw Error(errc::kInvalidArgument, "split fractions must sum to 1");
  }
  if (users.empty()) throw Error(errc::kInsufficientData, "cannot split an empty corpus");

  // Strata keyed by label name; std::map keeps them in lexicographic order.
  std::map<std::string, std::vector<std::string>> strata;
  std::unordered_set<std::string> seen;
  for (const auto& u : users) {
    if (!seen.insert(u.user_id).second) {
      throw Error(errc::kDuplicateId, "duplicate user_id '" + u.user_id + "' in split input");
    }
    const std::string key = u.label ? std::string(to_string(*u.label)) : std::string("unlabeled");
    strata[key].push_back(u.user_id);
  }

  DatasetSplit split;
  std::uint64_t stratum_index = 0;
  for (auto& [name, ids] : strata) {
    std::sort(ids.begin(), ids.end());
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stratum_index++)};
    std::mt19937_64 rng(seq);
    std::shuffle(ids.begin(), ids.end(), rng);

    const auto sizes = apportion(ids.size(), f);
    auto it = ids.begin();
    split.train.insert(split.train.end(), it, it + static_cast<std::ptrdiff_t>(sizes[0]));
    it += static_cast<std::ptrdiff_t>(sizes[0]);
    split.calibration.insert(split.calibration.end(), it, it + static_cast<std::ptrdiff_t>(sizes[1]));
    it += static_cast<std::ptrdiff_t>(sizes[1]);
    split.test.insert(split.test.end(), it, ids.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.calibration.begin(), split.calibration.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

DatasetSplit split_dataset(std::span<const UserHistory> corpus, const SplitFractions& fractions,
                           std::uint64_t seed) {
  std::vector<LabeledId> users;
  users.reserve(corpus.size());
  for (const auto& h : corpus) users.push_back({h.user_id, h.label});
  return split_dataset(users, fractions, seed);
}

}  // namespace botsentinel
