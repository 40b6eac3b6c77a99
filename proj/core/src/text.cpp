#include "botsentinel/text.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include "botsentinel/error.hpp"

namespace botsentinel {

namespace {

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }
bool is_tag_byte(unsigned char c) { return is_word_byte(c) || c == '_'; }

bool starts_with_url(std::string_view s, std::size_t pos) {
  auto matches = [&](std::string_view scheme) {
    if (s.size() - pos < scheme.size()) return false;
    for (std::size_t i = 0; i < scheme.size(); ++i) {
      if (std::tolower(static_cast<unsigned char>(s[pos + i])) != scheme[i]) return false;
    }
    return true;
  };
  return matches("http://") || matches("https://");
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

TokenizedTweet tokenize(std::string_view text) {
  // Blank out URLs so they split neighbouring tokens rather than merging them.
  std::string cleaned(text);
  for (std::size_t i = 0; i < cleaned.size();) {
    if (starts_with_url(cleaned, i)) {
      while (i < cleaned.size() && !std::isspace(static_cast<unsigned char>(cleaned[i]))) {
        cleaned[i++] = ' ';
      }
    } else {
      ++i;
    }
  }

  TokenizedTweet out;
  const std::size_t n = cleaned.size();
  std::size_t i = 0;
  while (i < n) {
    const auto c = static_cast<unsigned char>(cleaned[i]);
    if (c == '#' && i + 1 < n && is_tag_byte(static_cast<unsigned char>(cleaned[i + 1]))) {
      std::size_t j = i + 1;
      while (j < n && is_tag_byte(static_cast<unsigned char>(cleaned[j]))) ++j;
      out.hashtags.emplace_back(cleaned.substr(i + 1, j - i - 1));
      i = j;
    } else if (is_word_byte(c)) {
      std::size_t j = i;
      while (j < n && is_word_byte(static_cast<unsigned char>(cleaned[j]))) ++j;
      out.words.push_back(lowercase(std::string_view(cleaned).substr(i, j - i)));
      i = j;
    } else {
      ++i;
    }
  }
  return out;
}

SentimentLexicon parse_lexicon(std::istream& in, std::string name) {
  SentimentLexicon lex;
  lex.name = std::move(name);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw Error(errc::kParse, "lexicon '" + lex.name + "' line " + std::to_string(line_no) +
                                    ": expected word<TAB>score");
    }
    const std::string_view field = std::string_view(line).substr(tab + 1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value)) {
      throw Error(errc::kParse, "lexicon '" + lex.name + "' line " + std::to_string(line_no) +
                                    ": invalid score");
    }
    lex.scores[lowercase(std::string_view(line).substr(0, tab))] = value;
  }
  return lex;
}

SentimentLexicon load_lexicon(const std::filesystem::path& path, std::string name) {
  std::ifstream in(path);
  if (!in) throw Error(errc::kIo, "cannot open lexicon " + path.string());
  return parse_lexicon(in, std::move(name));
}

}  // namespace botsentinel
