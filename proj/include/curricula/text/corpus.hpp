#pragma once

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace curricula::text {

using TokenList = std::vector<std::string>;

/// Term <-> dense index map. Ids are assigned in order of first insertion.
class Vocabulary {
 public:
  int intern(const std::string& term);
  std::optional<int> find(const std::string& term) const;
  const std::string& term(int id) const { return terms_.at(static_cast<std::size_t>(id)); }
  int size() const noexcept { return static_cast<int>(terms_.size()); }
  const std::vector<std::string>& terms() const noexcept { return terms_; }

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, int> index_;
};

/// Bag-of-words corpus with optional per-document label sets.
struct Corpus {
  Vocabulary vocabulary;
  std::vector<std::vector<int>> documents;
  /// Label names, sorted ascending. Empty for unlabeled corpora.
  std::vector<std::string> label_names;
  /// Per-document indices into label_names. Empty for unlabeled corpora.
  std::vector<std::vector<int>> labels;

  bool labeled() const noexcept { return !label_names.empty(); }
  std::size_t token_count() const;

  static Corpus from_tokens(std::span<const TokenList> docs);

  /// Throws UnlabeledDocument when any label set is empty and EmptyCorpus when
  /// there are no documents.
  static Corpus from_labeled(std::span<const TokenList> docs,
                             std::span<const std::vector<std::string>> label_sets);

  /// Reconstructs the string form of every document.
  std::vector<TokenList> token_lists() const;
};

}  // namespace curricula::text
