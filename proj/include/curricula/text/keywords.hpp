#pragma once

#include <span>
#include <string>
#include <vector>

#include "curricula/text/corpus.hpp"

namespace curricula::text {

struct Keyword {
  std::string term;
  double weight = 0.0;

  friend bool operator==(const Keyword&, const Keyword&) = default;
};

/// Sorted by weight descending, ties by term ascending. All weights > 0.
using KeywordList = std::vector<Keyword>;

/// Orders by weight descending, then term ascending.
void sort_keywords(KeywordList& list);

/// score(t) = sum_d count(t, d) * ln(N / df(t)). Terms scoring zero are dropped.
/// Throws EmptyCorpus when `documents` is empty.
KeywordList tfidf_keywords(std::span<const TokenList> documents, std::size_t top_n);

}  // namespace curricula::text
