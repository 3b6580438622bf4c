#include "curricula/text/corpus.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "curricula/error.hpp"

namespace curricula::text {

int Vocabulary::intern(const std::string& term) {
  auto [it, inserted] = index_.try_emplace(term, static_cast<int>(terms_.size()));
  if (inserted) terms_.push_back(term);
  return it->second;
}

std::optional<int> Vocabulary::find(const std::string& term) const {
  if (auto it = index_.find(term); it != index_.end()) return it->second;
  return std::nullopt;
}

std::size_t Corpus::token_count() const {
  return std::accumulate(documents.begin(), documents.end(), std::size_t{0},
                         [](std::size_t acc, const auto& d) { return acc + d.size(); });
}

Corpus Corpus::from_tokens(std::span<const TokenList> docs) {
  Corpus corpus;
  corpus.documents.reserve(docs.size());
  for (const auto& doc : docs) {
    std::vector<int> ids;
    ids.reserve(doc.size());
    for (const auto& token : doc) ids.push_back(corpus.vocabulary.intern(token));
    corpus.documents.push_back(std::move(ids));
  }
  return corpus;
}

Corpus Corpus::from_labeled(std::span<const TokenList> docs,
                            std::span<const std::vector<std::string>> label_sets) {
  if (docs.empty()) throw Error(ErrorCode::EmptyCorpus, "labeled corpus has no documents");
  if (docs.size() != label_sets.size())
    throw Error(ErrorCode::UnlabeledDocument, "label set count does not match document count");

  std::set<std::string> all;
  for (std::size_t d = 0; d < label_sets.size(); ++d) {
    if (label_sets[d].empty())
      throw Error(ErrorCode::UnlabeledDocument, "document " + std::to_string(d) + " has no labels");
    all.insert(label_sets[d].begin(), label_sets[d].end());
  }

  Corpus corpus = from_tokens(docs);
  corpus.label_names.assign(all.begin(), all.end());
  corpus.labels.reserve(label_sets.size());
  for (const auto& set : label_sets) {
    std::vector<int> ids;
    for (const auto& name : set) {
      auto pos = std::lower_bound(corpus.label_names.begin(), corpus.label_names.end(), name);
      ids.push_back(static_cast<int>(pos - corpus.label_names.begin()));
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    corpus.labels.push_back(std::move(ids));
  }
  return corpus;
}

std::vector<TokenList> Corpus::token_lists() const {
  std::vector<TokenList> out;
  out.reserve(documents.size());
  for (const auto& doc : documents) {
    TokenList tokens;
    tokens.reserve(doc.size());
    for (int id : doc) tokens.push_back(vocabulary.term(id));
    out.push_back(std::move(tokens));
  }
  return out;
}

}  // namespace curricula::text
