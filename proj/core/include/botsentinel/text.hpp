#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace botsentinel {

struct TokenizedTweet {
  std::vector<std::string> words;     // lowercase alphanumeric runs
  std::vector<std::string> hashtags;  // without the leading '#'
};

// http/https URLs are dropped first; then '#' + [alnum_]+ runs become hashtags
// and the remaining alphanumeric runs become lowercase words. Bytes >= 0x80 are
// treated as letters so UTF-8 words stay intact.
TokenizedTweet tokenize(std::string_view text);

struct SentimentLexicon {
  std::string name;
  std::unordered_map<std::string, double> scores;

  double score(const std::string& word) const {
    auto it = scores.find(word);
    return it == scores.end() ? 0.0 : it->second;
  }
};

// "word<TAB>score" per line; '#' comment lines and blank lines are skipped.
SentimentLexicon parse_lexicon(std::istream& in, std::string name);
SentimentLexicon load_lexicon(const std::filesystem::path& path, std::string name);

}  // namespace botsentinel
