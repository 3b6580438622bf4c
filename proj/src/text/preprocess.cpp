#include "curricula/text/preprocess.hpp"

#include <fstream>
#include <sstream>

#include "curricula/error.hpp"
#include "curricula/text/porter_stemmer.hpp"

namespace curricula::text {
namespace {

bool is_kept(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80 ||
         c == ' ';
}

bool is_space(unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

}  // namespace

PreprocessConfig PreprocessConfig::defaults() {
  PreprocessConfig config;
  config.ngram_orders = {2};
  config.stopwords = english_stopwords();
  return config;
}

PreprocessConfig PreprocessConfig::plain() {
  PreprocessConfig config;
  config.stemmer = Stemmer::none;
  return config;
}

const std::set<std::string>& english_stopwords() {
  static const std::set<std::string> words = {
      "a",       "about",   "above",  "after",   "again",  "against", "all",     "also",   "am",
      "an",      "and",     "any",    "are",     "as",     "at",      "be",      "because", "been",
      "before",  "being",   "below",  "between", "both",   "but",     "by",      "can",    "could",
      "did",     "do",      "does",   "doing",   "don",    "down",    "during",  "each",   "even",
      "few",     "for",     "from",   "further", "get",    "go",      "going",   "got",    "had",
      "has",     "have",    "having", "he",      "her",    "here",    "hers",    "herself", "him",
      "himself", "his",     "how",    "i",       "if",     "in",      "into",    "is",     "it",
      "its",     "itself",  "just",   "know",    "let",    "like",    "ll",      "me",     "more",
      "most",    "much",    "my",     "myself",  "no",     "nor",     "not",     "now",    "of",
      "off",     "okay",    "on",     "once",    "one",    "only",    "or",      "other",  "our",
      "ours",    "ourselves", "out",  "over",    "own",    "re",      "really",  "right",  "s",
      "same",    "see",     "she",    "should",  "so",     "some",    "such",    "t",      "than",
      "that",    "the",     "their",  "theirs",  "them",   "themselves", "then", "there",  "these",
      "they",    "thing",   "things", "this",    "those",  "through", "to",      "too",    "um",
      "under",   "until",   "up",     "us",      "ve",     "very",    "want",    "was",    "way",
      "we",      "well",    "were",   "what",    "when",   "where",   "which",   "while",  "who",
      "whom",    "why",     "will",   "with",    "would",  "yeah",    "you",     "your",   "yours",
      "yourself", "yourselves",
  };
  return words;
}

std::set<std::string> load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot read stopword file " + path.string());
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word) || word.front() == '#') continue;
    words.insert(word);
  }
  return words;
}

TokenList split_whitespace(std::string_view raw) {
  TokenList tokens;
  std::string current;
  for (char ch : raw) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_space(c)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : ch);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

TokenList preprocess(std::string_view raw, const PreprocessConfig& config) {
  std::string text(raw);
  if (config.lowercase)
    for (char& ch : text)
      if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
  if (config.strip_special)
    for (char& ch : text)
      if (!is_kept(static_cast<unsigned char>(ch))) ch = ' ';

  TokenList unigrams;
  std::string current;
  auto flush = [&] {
    if (current.empty()) return;
    if (!config.stopwords.contains(current))
      unigrams.push_back(config.stemmer == Stemmer::porter ? porter_stem(current) : current);
    current.clear();
  };
  for (char ch : text) {
    if (is_space(static_cast<unsigned char>(ch)))
      flush();
    else
      current.push_back(ch);
  }
  flush();

  TokenList out = unigrams;
  for (int order : config.ngram_orders) {
    if (order < 2) continue;
    const auto n = static_cast<std::size_t>(order);
    for (std::size_t i = 0; i + n <= unigrams.size(); ++i) {
      std::string gram = unigrams[i];
      for (std::size_t j = 1; j < n; ++j) gram += "_" + unigrams[i + j];
      out.push_back(std::move(gram));
    }
  }
  return out;
}

}  // namespace curricula::text
