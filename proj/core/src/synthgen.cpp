#include "botsentinel/synthgen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <variant>

#include "botsentinel/atomic_file.hpp"
#include "botsentinel/csv.hpp"
#include "botsentinel/error.hpp"

namespace botsentinel {
namespace {

constexpr std::int64_t kEpochBase = 1'577'836'800;  // 2020-01-01T00:00:00Z
constexpr double kDay = 86400.0;

constexpr std::array<std::string_view, 16> kPositive{
    "good", "great", "love", "happy", "best", "amazing", "awesome", "nice",
    "win", "excellent", "beautiful", "free", "fun", "glad", "wonderful", "thanks"};
constexpr std::array<std::string_view, 16> kNegative{
    "bad", "sad", "hate", "terrible", "awful", "worst", "angry", "poor",
    "wrong", "ugly", "sorry", "lost", "fail", "tired", "boring", "annoying"};

using Field = std::variant<std::size_t GeneratorProfile::*, double GeneratorProfile::*>;

const std::vector<std::pair<std::string_view, Field>>& profile_fields() {
  static const std::vector<std::pair<std::string_view, Field>> fields{
      {"n_tweets_mean", &GeneratorProfile::n_tweets_mean},
      {"n_tweets_spread", &GeneratorProfile::n_tweets_spread},
      {"tweets_per_day", &GeneratorProfile::tweets_per_day},
      {"peak_trough_ratio", &GeneratorProfile::peak_trough_ratio},
      {"semidiurnal_fraction", &GeneratorProfile::semidiurnal_fraction},
      {"interval_seconds", &GeneratorProfile::interval_seconds},
      {"interval_jitter_sd", &GeneratorProfile::interval_jitter_sd},
      {"vocabulary_size", &GeneratorProfile::vocabulary_size},
      {"zipf_exponent", &GeneratorProfile::zipf_exponent},
      {"pool_size", &GeneratorProfile::pool_size},
      {"template_count", &GeneratorProfile::template_count},
      {"words_min", &GeneratorProfile::words_min},
      {"words_max", &GeneratorProfile::words_max},
      {"hashtag_rate", &GeneratorProfile::hashtag_rate},
      {"url_rate", &GeneratorProfile::url_rate},
      {"sentiment_rate", &GeneratorProfile::sentiment_rate},
      {"sentiment_bias", &GeneratorProfile::sentiment_bias},
  };
  return fields;
}

std::string_view kind_name(ProfileKind kind) { return kind == ProfileKind::kOrganic ? "organic" : "inorganic"; }

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Cumulative Zipf weights over ranks 1..n.
std::vector<double> zipf_cdf(std::size_t n, double exponent) {
  std::vector<double> cdf(n);
  double acc = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    acc += std::pow(static_cast<double>(r + 1), -exponent);
    cdf[r] = acc;
  }
  for (double& c : cdf) c /= acc;
  return cdf;
}

template <class Rng>
std::size_t draw_cdf(const std::vector<double>& cdf, Rng& rng) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

template <class Rng>
std::size_t uniform_index(std::size_t lo, std::size_t hi, Rng& rng) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

template <class Rng>
bool bernoulli(double p, Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

template <class Rng>
std::string_view sentiment_word(double bias, Rng& rng) {
  if (bernoulli(bias, rng)) return kPositive[uniform_index(0, kPositive.size() - 1, rng)];
  return kNegative[uniform_index(0, kNegative.size() - 1, rng)];
}

template <class Rng>
std::size_t draw_count(const GeneratorProfile& p, Rng& rng) {
  const double m = static_cast<double>(p.n_tweets_mean);
  const double x = std::uniform_real_distribution<double>(m * (1.0 - p.n_tweets_spread),
                                                          m * (1.0 + p.n_tweets_spread))(rng);
  return std::max(kMinGeneratedTweets, static_cast<std::size_t>(std::llround(x)));
}

template <class Rng>
std::vector<std::int64_t> organic_times(const GeneratorProfile& p, std::size_t n, Rng& rng) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  // A semidiurnal_fraction share of users peak twice a day strongly enough for
  // the 12-hour cycle to dominate; the rest keep a weaker second harmonic.
  const double f = bernoulli(p.semidiurnal_fraction, rng)
                       ? std::uniform_real_distribution<double>(0.65, 0.8)(rng)
                       : std::uniform_real_distribution<double>(0.05, 0.35)(rng);
  const double phase = std::uniform_real_distribution<double>(0.0, two_pi)(rng);
  const double phase2 = std::uniform_real_distribution<double>(0.0, two_pi)(rng);
  const auto shape = [&](double t) {
    const double w = two_pi * t / kDay;
    return (1.0 - f) * std::cos(w - phase) + f * std::cos(2.0 * w - phase2);
  };
  // Shift the daily shape so that max / min equals the peak/trough ratio.
  constexpr int grid = 1440;
  double gmin = shape(0.0), gmax = gmin, gsum = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double g = shape(kDay * i / grid);
    gmin = std::min(gmin, g);
    gmax = std::max(gmax, g);
    gsum += g;
  }
  const double floor_level = (gmax - gmin) / (p.peak_trough_ratio - 1.0);
  const double hmean = gsum / grid - gmin + floor_level;
  const double hmax = gmax - gmin + floor_level;
  const double rate = p.tweets_per_day * std::uniform_real_distribution<double>(0.5, 1.5)(rng) / kDay;
  std::exponential_distribution<double> gap(rate * hmax / hmean);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<std::int64_t> times;
  times.reserve(n);
  double t = kEpochBase + std::uniform_real_distribution<double>(0.0, 30.0 * kDay)(rng);
  while (times.size() < n) {
    t += gap(rng);
    if (unit(rng) * hmax < shape(t) - gmin + floor_level) times.push_back(static_cast<std::int64_t>(std::floor(t)));
  }
  return times;
}

template <class Rng>
std::vector<std::int64_t> inorganic_times(const GeneratorProfile& p, std::size_t n, Rng& rng) {
  std::normal_distribution<double> jitter(0.0, p.interval_jitter_sd);
  std::vector<std::int64_t> times;
  times.reserve(n);
  auto t = kEpochBase + static_cast<std::int64_t>(std::uniform_real_distribution<double>(0.0, 30.0 * kDay)(rng));
  for (std::size_t i = 0; i < n; ++i) {
    times.push_back(t);
    t += std::max<std::int64_t>(1, std::llround(p.interval_seconds + jitter(rng)));
  }
  return times;
}

template <class Rng>
void append_hashtags(std::string& text, double rate, Rng& rng, const auto& pick) {
  if (rate <= 0.0) return;
  const int k = std::poisson_distribution<int>(rate)(rng);
  for (int i = 0; i < k; ++i) {
    text += " #";
    text += pick();
  }
}

template <class Rng>
std::string short_link(Rng& rng) {
  static constexpr std::string_view alphabet = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
  std::string link = "https://t.co/";
  for (int i = 0; i < 10; ++i) link += alphabet[uniform_index(0, alphabet.size() - 1, rng)];
  return link;
}

std::mt19937_64 user_rng(std::uint64_t seed, std::size_t index, ProfileKind kind) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(static_cast<std::uint64_t>(index) >> 32),
                    static_cast<std::uint32_t>(kind)};
  return std::mt19937_64(seq);
}

std::string user_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "user_%06zu", index);
  return buf;
}

UserHistory make_organic(const GeneratorProfile& p, const std::vector<double>& cdf, std::size_t index,
                         std::uint64_t seed) {
  auto rng = user_rng(seed, index, ProfileKind::kOrganic);
  UserHistory h{user_id(index), {}, Label::kOrganic};
  const std::size_t n = draw_count(p, rng);
  const auto times = organic_times(p, n, rng);
  h.tweets.reserve(n);
  for (std::int64_t t : times) {
    const std::size_t len = uniform_index(p.words_min, p.words_max, rng);
    std::vector<std::string> words;
    words.reserve(len);
    for (std::size_t w = 0; w < len; ++w) words.push_back(vocabulary_word(draw_cdf(cdf, rng)));
    if (bernoulli(p.sentiment_rate, rng)) words[uniform_index(0, len - 1, rng)] = sentiment_word(p.sentiment_bias, rng);
    std::string text;
    for (std::size_t w = 0; w < words.size(); ++w) {
      if (w) text += ' ';
      text += words[w];
    }
    append_hashtags(text, p.hashtag_rate, rng, [&] { return vocabulary_word(draw_cdf(cdf, rng)); });
    if (bernoulli(p.url_rate, rng)) text += " " + short_link(rng);
    h.tweets.push_back({t, std::move(text)});
  }
  return h;
}

UserHistory make_inorganic(const GeneratorProfile& p, std::size_t index, std::uint64_t seed) {
  auto rng = user_rng(seed, index, ProfileKind::kInorganic);
  UserHistory h{user_id(index), {}, Label::kInorganic};
  const std::size_t n = draw_count(p, rng);
  const auto times = inorganic_times(p, n, rng);

  std::vector<std::string> pool;
  while (pool.size() < p.pool_size) {
    auto w = vocabulary_word(uniform_index(0, p.vocabulary_size - 1, rng));
    if (std::find(pool.begin(), pool.end(), w) == pool.end()) pool.push_back(std::move(w));
  }
  // Keywords are reused with Zipf weights, so a few of them recur in most tweets.
  const auto weights = zipf_cdf(pool.size(), p.zipf_exponent);
  std::vector<std::string> templates(p.template_count);
  for (auto& tpl : templates) {
    const std::size_t len = uniform_index(p.words_min, p.words_max, rng);
    for (std::size_t w = 0; w < len; ++w) {
      if (w) tpl += ' ';
      tpl += pool[draw_cdf(weights, rng)];
    }
  }
  const auto pick = [&] { return pool[draw_cdf(weights, rng)]; };

  h.tweets.reserve(n);
  for (std::int64_t t : times) {
    std::string text = templates[uniform_index(0, templates.size() - 1, rng)];
    if (bernoulli(p.sentiment_rate, rng)) {
      text += ' ';
      text += sentiment_word(p.sentiment_bias, rng);
    }
    append_hashtags(text, p.hashtag_rate, rng, pick);
    if (bernoulli(p.url_rate, rng)) text += " " + short_link(rng);
    h.tweets.push_back({t, std::move(text)});
  }
  return h;
}

}  // namespace

GeneratorProfile default_organic_profile() { return {}; }

GeneratorProfile default_inorganic_profile() {
  GeneratorProfile p;
  p.kind = ProfileKind::kInorganic;
  p.n_tweets_mean = 2598;
  p.zipf_exponent = 1.0;
  p.words_min = 8;
  p.words_max = 12;
  p.hashtag_rate = 2.0;
  p.url_rate = 0.9;
  p.sentiment_rate = 0.6;
  p.sentiment_bias = 0.9;
  return p;
}

std::span<const std::string_view> positive_sentiment_words() { return kPositive; }
std::span<const std::string_view> negative_sentiment_words() { return kNegative; }

std::string vocabulary_word(std::size_t index) {
  static constexpr std::string_view consonants = "bdfgklmnprstvzh";
  static constexpr std::string_view vowels = "aeiou";
  constexpr std::size_t syllables = 15 * 5;
  constexpr std::size_t space = syllables * syllables * syllables;
  // An odd multiplier permutes the code space so neighbouring ranks look unrelated.
  std::size_t code = (index % space) * 7919 % space;
  std::string word;
  for (int s = 0; s < 3; ++s) {
    const std::size_t syl = code % syllables;
    code /= syllables;
    word += consonants[syl / 5];
    word += vowels[syl % 5];
  }
  return word;
}

void validate(const GeneratorProfile& p) {
  const auto bad = [&](std::string_view field, std::string_view why) {
    throw Error(errc::kInvalidArgument,
                std::string(kind_name(p.kind)) + "." + std::string(field) + " " + std::string(why));
  };
  for (const auto& [name, field] : profile_fields()) {
    if (const auto* d = std::get_if<double GeneratorProfile::*>(&field)) {
      if (!std::isfinite(p.**d) || p.**d < 0.0) bad(name, "must be a finite non-negative number");
    }
  }
  if (p.n_tweets_mean == 0) bad("n_tweets_mean", "must be positive");
  if (p.n_tweets_spread >= 1.0) bad("n_tweets_spread", "must be below 1");
  if (p.words_min == 0 || p.words_min > p.words_max) bad("words_min", "must satisfy 1 <= words_min <= words_max");
  if (p.vocabulary_size == 0) bad("vocabulary_size", "must be positive");
  if (p.url_rate > 1.0) bad("url_rate", "is a probability");
  if (p.sentiment_rate > 1.0) bad("sentiment_rate", "is a probability");
  if (p.sentiment_bias > 1.0) bad("sentiment_bias", "is a probability");
  if (p.kind == ProfileKind::kOrganic) {
    if (p.tweets_per_day <= 0.0) bad("tweets_per_day", "must be positive");
    if (p.peak_trough_ratio <= 1.0) bad("peak_trough_ratio", "must exceed 1");
    if (p.semidiurnal_fraction > 1.0) bad("semidiurnal_fraction", "is a probability");
  } else {
    if (p.interval_seconds < 1.0) bad("interval_seconds", "must be at least 1");
    if (p.pool_size == 0 || p.pool_size > p.vocabulary_size) bad("pool_size", "must lie in [1, vocabulary_size]");
    if (p.template_count == 0 || p.template_count > 20) bad("template_count", "must lie in [1, 20]");
  }
}

GeneratorProfiles parse_profiles(std::string_view text) {
  GeneratorProfiles out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto where = "profile line " + std::to_string(lineno) + ": ";
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw Error(errc::kParse, where + "expected 'kind.key = value'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    const auto dot = key.find('.');
    if (dot == std::string::npos) throw Error(errc::kParse, where + "key '" + key + "' lacks an organic./inorganic. prefix");
    const std::string kind = key.substr(0, dot);
    GeneratorProfile* target = kind == "organic" ? &out.organic : kind == "inorganic" ? &out.inorganic : nullptr;
    if (!target) throw Error(errc::kParse, where + "unknown profile '" + kind + "'");
    const std::string name = key.substr(dot + 1);
    const auto& fields = profile_fields();
    const auto it = std::find_if(fields.begin(), fields.end(), [&](const auto& f) { return f.first == name; });
    if (it == fields.end()) throw Error(errc::kParse, where + "unknown key '" + name + "'");
    std::optional<double> number;
    try {
      number = csv::parse_double(value);
    } catch (const Error&) {
    }
    if (!number || !std::isfinite(*number)) throw Error(errc::kParse, where + "'" + value + "' is not a number");
    if (const auto* d = std::get_if<double GeneratorProfile::*>(&it->second)) {
      target->**d = *number;
    } else {
      if (*number < 0.0 || *number != std::floor(*number)) {
        throw Error(errc::kParse, where + name + " must be a non-negative integer");
      }
      target->*std::get<std::size_t GeneratorProfile::*>(it->second) = static_cast<std::size_t>(*number);
    }
  }
  validate(out.organic);
  validate(out.inorganic);
  return out;
}

GeneratorProfiles load_profiles(const std::filesystem::path& path) { return parse_profiles(read_file(path)); }

std::string serialize_profiles(const GeneratorProfiles& profiles) {
  std::string out;
  for (const GeneratorProfile* p : {&profiles.organic, &profiles.inorganic}) {
    for (const auto& [name, field] : profile_fields()) {
      out += std::string(kind_name(p->kind)) + "." + std::string(name) + " = ";
      if (const auto* d = std::get_if<double GeneratorProfile::*>(&field)) {
        out += csv::format_double(p->**d);
      } else {
        out += std::to_string(p->*std::get<std::size_t GeneratorProfile::*>(field));
      }
      out += '\n';
    }
  }
  return out;
}

UserHistory generate_user(ProfileKind kind, std::size_t index, std::uint64_t seed, const GeneratorProfiles& profiles) {
  if (kind == ProfileKind::kInorganic) {
    validate(profiles.inorganic);
    return make_inorganic(profiles.inorganic, index, seed);
  }
  validate(profiles.organic);
  return make_organic(profiles.organic, zipf_cdf(profiles.organic.vocabulary_size, profiles.organic.zipf_exponent),
                      index, seed);
}

std::vector<UserHistory> generate_corpus(std::size_t n_organic, std::size_t n_inorganic, std::uint64_t seed,
                                         const GeneratorProfiles& profiles) {
  validate(profiles.organic);
  validate(profiles.inorganic);
  const auto cdf = zipf_cdf(profiles.organic.vocabulary_size, profiles.organic.zipf_exponent);
  std::vector<UserHistory> out;
  out.reserve(n_organic + n_inorganic);
  for (std::size_t i = 0; i < n_organic; ++i) out.push_back(make_organic(profiles.organic, cdf, i, seed));
  for (std::size_t i = 0; i < n_inorganic; ++i) {
    out.push_back(make_inorganic(profiles.inorganic, n_organic + i, seed));
  }
  return out;
}

}  // namespace botsentinel
