#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "botsentinel/corpus.hpp"

namespace botsentinel {

enum class ProfileKind { kOrganic, kInorganic };

// Every distributional knob of the generator. Fields irrelevant to a kind are
// ignored for it (timing_* for organic, interval_* for inorganic and so on).
struct GeneratorProfile {
  ProfileKind kind = ProfileKind::kOrganic;
  std::size_t n_tweets_mean = 3121;
  double n_tweets_spread = 0.5;  // uniform on mean * [1 - spread, 1 + spread]

  // organic timing: thinned Poisson with a daily cycle
  double tweets_per_day = 16.0;
  double peak_trough_ratio = 6.0;
  double semidiurnal_fraction = 0.25;  // share of users whose 12-hour cycle dominates

  // inorganic timing: near-fixed spacing
  double interval_seconds = 7200.0;
  double interval_jitter_sd = 60.0;

  // text
  std::size_t vocabulary_size = 20000;  // organic
  double zipf_exponent = 1.1;           // organic vocabulary; inorganic keyword pool
  std::size_t pool_size = 30;           // inorganic keyword pool
  std::size_t template_count = 20;      // inorganic, at most 20
  std::size_t words_min = 3;
  std::size_t words_max = 25;
  double hashtag_rate = 0.3;            // mean hashtags per tweet
  double url_rate = 0.0;                // probability a tweet carries a link
  double sentiment_rate = 0.4;          // probability a tweet carries a sentiment word
  double sentiment_bias = 0.5;          // probability that sentiment word is positive

  friend bool operator==(const GeneratorProfile&, const GeneratorProfile&) = default;
};

GeneratorProfile default_organic_profile();
GeneratorProfile default_inorganic_profile();

struct GeneratorProfiles {
  GeneratorProfile organic = default_organic_profile();
  GeneratorProfile inorganic = default_inorganic_profile();

  friend bool operator==(const GeneratorProfiles&, const GeneratorProfiles&) = default;
};

// Throws Error(invalid_argument) naming the offending field.
void validate(const GeneratorProfile& profile);

// "organic.key = value" / "inorganic.key = value" lines, '#' comments. Keys not
// mentioned keep their defaults.
GeneratorProfiles parse_profiles(std::string_view text);
GeneratorProfiles load_profiles(const std::filesystem::path& path);
std::string serialize_profiles(const GeneratorProfiles& profiles);

inline constexpr std::size_t kDefaultOrganicUsers = 470;
inline constexpr std::size_t kDefaultInorganicUsers = 373;
// Every generated history reaches this length so temporal features are defined.
inline constexpr std::size_t kMinGeneratedTweets = 21;

// The words the generator draws sentiment from; the bundled lexicons score them.
std::span<const std::string_view> positive_sentiment_words();
std::span<const std::string_view> negative_sentiment_words();

// The i-th organic vocabulary entry, a consonant-vowel word.
std::string vocabulary_word(std::size_t index);

// One user from its own RNG stream derived from (seed, index).
UserHistory generate_user(ProfileKind kind, std::size_t index, std::uint64_t seed,
                          const GeneratorProfiles& profiles = {});

// Organic users first (indices 0..n_organic-1), then inorganic. Ids are
// "user_%06zu" over the global index.
std::vector<UserHistory> generate_corpus(std::size_t n_organic, std::size_t n_inorganic, std::uint64_t seed,
                                         const GeneratorProfiles& profiles = {});

}  // namespace botsentinel
