#include "botsentinel/semantic_features.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "botsentinel/error.hpp"

namespace botsentinel {

namespace {

std::size_t total_words(std::span<const TokenizedTweet> tweets) {
  std::size_t total = 0;
  for (const auto& t : tweets) total += t.words.size();
  return total;
}

void require_tweets(std::span<const TokenizedTweet> tweets) {
  if (tweets.empty()) throw Error(errc::kInsufficientData, "history has no tweets");
}

void require_words(std::size_t total) {
  if (total == 0) throw Error(errc::kInsufficientData, "history contains no words");
}

}  // namespace

std::vector<TokenizedTweet> tokenize_history(const UserHistory& history) {
  std::vector<TokenizedTweet> out;
  out.reserve(history.tweets.size());
  for (const auto& t : history.tweets) out.push_back(tokenize(t.text));
  return out;
}

LexicalDiversity lexical_diversity(std::span<const TokenizedTweet> tweets) {
  const std::size_t total = total_words(tweets);
  require_words(total);
  std::unordered_set<std::string_view> vocab;
  for (const auto& t : tweets) {
    for (const auto& w : t.words) vocab.insert(w);
  }
  return {static_cast<double>(vocab.size()) / static_cast<double>(total),
          static_cast<int>(vocab.size())};
}

WordStats word_stats(std::span<const TokenizedTweet> tweets) {
  require_tweets(tweets);
  const auto n = static_cast<double>(tweets.size());
  double mean = 0.0;
  for (const auto& t : tweets) mean += static_cast<double>(t.words.size());
  mean /= n;
  double var = 0.0;
  for (const auto& t : tweets) {
    const double d = static_cast<double>(t.words.size()) - mean;
    var += d * d;
  }
  return {mean, var / n};
}

double hashtag_frequency(std::span<const TokenizedTweet> tweets) {
  require_tweets(tweets);
  double total = 0.0;
  for (const auto& t : tweets) total += static_cast<double>(t.hashtags.size());
  return total / static_cast<double>(tweets.size());
}

std::vector<double> top_word_frequencies(std::span<const TokenizedTweet> tweets, std::size_t k) {
  const std::size_t total = total_words(tweets);
  require_words(total);
  std::unordered_map<std::string_view, std::size_t> freq;
  for (const auto& t : tweets) {
    for (const auto& w : t.words) ++freq[w];
  }
  std::vector<std::pair<std::string_view, std::size_t>> ranked(freq.begin(), freq.end());
  const std::size_t keep = std::min(k, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(),
                    [](const auto& a, const auto& b) {
                      return a.second != b.second ? a.second > b.second : a.first < b.first;
                    });
  std::vector<double> rho(k, 0.0);
  for (std::size_t i = 0; i < keep; ++i) {
    rho[i] = static_cast<double>(ranked[i].second) / static_cast<double>(total);
  }
  return rho;
}

std::vector<double> sentiment_scores(std::span<const TokenizedTweet> tweets,
                                     std::span<const SentimentLexicon> lexicons) {
  require_tweets(tweets);
  std::vector<double> scores;
  scores.reserve(lexicons.size());
  for (const auto& lex : lexicons) {
    if (lex.scores.empty()) {
      throw Error(errc::kInvalidArgument, "sentiment lexicon '" + lex.name + "' is empty");
    }
    double sum = 0.0;
    for (const auto& t : tweets) {
      for (const auto& w : t.words) sum += lex.score(w);
    }
    scores.push_back(sum / static_cast<double>(tweets.size()));
  }
  return scores;
}

LexicalDiversity lexical_diversity(const UserHistory& history) {
  return lexical_diversity(tokenize_history(history));
}
WordStats word_stats(const UserHistory& history) { return word_stats(tokenize_history(history)); }
double hashtag_frequency(const UserHistory& history) {
  return hashtag_frequency(tokenize_history(history));
}
std::vector<double> top_word_frequencies(const UserHistory& history, std::size_t k) {
  return top_word_frequencies(tokenize_history(history), k);
}
std::vector<double> sentiment_scores(const UserHistory& history,
                                     std::span<const SentimentLexicon> lexicons) {
  return sentiment_scores(tokenize_history(history), lexicons);
}

SemanticFeatures semantic_features(const UserHistory& history,
                                   std::span<const SentimentLexicon> lexicons) {
  if (lexicons.size() != kLexiconCount) {
    throw Error(errc::kInvalidArgument, "semantic features need exactly three sentiment lexicons");
  }
  const auto tokens = tokenize_history(history);
  SemanticFeatures f;
  const LexicalDiversity ld = lexical_diversity(tokens);
  f.lexical_diversity = ld.ratio;
  f.unique_words = ld.unique;
  const WordStats ws = word_stats(tokens);
  f.mean_words = ws.mean;
  f.var_words = ws.variance;
  f.hashtag_freq = hashtag_frequency(tokens);
  const auto rho = top_word_frequencies(tokens, kTopWords);
  std::copy(rho.begin(), rho.end(), f.rho.begin());
  const auto sent = sentiment_scores(tokens, lexicons);
  std::copy(sent.begin(), sent.end(), f.sentiment.begin());
  return f;
}

}  // namespace botsentinel
