#include "curricula/text/keywords.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "curricula/error.hpp"

namespace curricula::text {

void sort_keywords(KeywordList& list) {
  std::sort(list.begin(), list.end(), [](const Keyword& a, const Keyword& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.term < b.term;
  });
}

KeywordList tfidf_keywords(std::span<const TokenList> documents, std::size_t top_n) {
  if (documents.empty()) throw Error(ErrorCode::EmptyCorpus, "tf-idf needs at least one document");

  // Ordered maps keep floating-point accumulation order independent of input order.
  std::map<std::string, long> term_count;
  std::map<std::string, long> doc_freq;
  for (const auto& doc : documents) {
    std::set<std::string> seen;
    for (const auto& token : doc) {
      ++term_count[token];
      if (seen.insert(token).second) ++doc_freq[token];
    }
  }

  const double n_docs = static_cast<double>(documents.size());
  KeywordList list;
  for (const auto& [term, count] : term_count) {
    const double idf = std::log(n_docs / static_cast<double>(doc_freq.at(term)));
    const double score = static_cast<double>(count) * idf;
    if (score > 0.0) list.push_back({term, score});
  }
  sort_keywords(list);
  if (list.size() > top_n) list.resize(top_n);
  return list;
}

}  // namespace curricula::text
