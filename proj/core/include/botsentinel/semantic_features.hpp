#pragma once

#include <array>
#include <span>
#include <vector>

#include "botsentinel/corpus.hpp"
#include "botsentinel/text.hpp"

namespace botsentinel {

inline constexpr std::size_t kTopWords = 5;
inline constexpr std::size_t kLexiconCount = 3;

struct SemanticFeatures {
  double lexical_diversity = 0.0;
  int unique_words = 0;
  double mean_words = 0.0;
  double var_words = 0.0;  // population variance
  double hashtag_freq = 0.0;
  std::array<double, kTopWords> rho{};
  std::array<double, kLexiconCount> sentiment{};
};

std::vector<TokenizedTweet> tokenize_history(const UserHistory& history);

struct LexicalDiversity {
  double ratio = 0.0;
  int unique = 0;
};

LexicalDiversity lexical_diversity(std::span<const TokenizedTweet> tweets);
LexicalDiversity lexical_diversity(const UserHistory& history);

struct WordStats {
  double mean = 0.0;
  double variance = 0.0;
};

WordStats word_stats(std::span<const TokenizedTweet> tweets);
WordStats word_stats(const UserHistory& history);

double hashtag_frequency(std::span<const TokenizedTweet> tweets);
double hashtag_frequency(const UserHistory& history);

// Relative frequencies of the k most used words, ties broken by the word's
// lexicographic order, zero-padded to length k.
std::vector<double> top_word_frequencies(std::span<const TokenizedTweet> tweets, std::size_t k = kTopWords);
std::vector<double> top_word_frequencies(const UserHistory& history, std::size_t k = kTopWords);

// Mean over tweets of the summed word scores, one value per lexicon in order.
std::vector<double> sentiment_scores(std::span<const TokenizedTweet> tweets,
                                     std::span<const SentimentLexicon> lexicons);
std::vector<double> sentiment_scores(const UserHistory& history,
                                     std::span<const SentimentLexicon> lexicons);

SemanticFeatures semantic_features(const UserHistory& history,
                                   std::span<const SentimentLexicon> lexicons);

}  // namespace botsentinel
