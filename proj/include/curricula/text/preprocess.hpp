#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>

#include "curricula/text/corpus.hpp"

namespace curricula::text {

enum class Stemmer { porter, none };

struct PreprocessConfig {
  bool lowercase = true;
  /// Replace everything except letters, digits and spaces with a space.
  /// Bytes >= 0x80 count as letters so UTF-8 text survives untouched.
  bool strip_special = true;
  Stemmer stemmer = Stemmer::porter;
  /// Subset of {2, 3}. Unigrams are always emitted.
  std::set<int> ngram_orders;
  std::set<std::string> stopwords;

  /// Porter stemming, bigrams and the built-in English stopword list.
  static PreprocessConfig defaults();
  /// Lowercase and strip only; used for title matching.
  static PreprocessConfig plain();
};

const std::set<std::string>& english_stopwords();

/// One stopword per line; blank lines and lines starting with '#' are skipped.
std::set<std::string> load_stopwords(const std::filesystem::path& path);

/// lowercase -> strip_special -> whitespace split -> stopwords -> stem -> n-grams.
TokenList preprocess(std::string_view raw, const PreprocessConfig& config);

/// Lowercase + whitespace split only.
TokenList split_whitespace(std::string_view raw);

}  // namespace curricula::text
