#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "curricula/text/corpus.hpp"
#include "curricula/text/keywords.hpp"

namespace curricula::text {

/// Hyperparameters for a collapsed Gibbs chain. When alpha is unset the
/// symmetric document prior defaults to 50 / k.
struct GibbsConfig {
  std::optional<double> alpha;
  double beta = 0.01;
  int iterations = 1000;
  std::uint64_t seed = 1;

  double alpha_for(int k) const { return alpha.value_or(50.0 / static_cast<double>(k)); }
};

using RowMatrixXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Unsupervised topic model. Rows of topic_word and doc_topic sum to one.
struct LdaModel {
  int k = 0;
  double alpha = 0.0;
  double beta = 0.0;
  int iterations = 0;
  std::uint64_t seed = 0;
  Vocabulary vocabulary;
  RowMatrixXd topic_word;  // k x V
  RowMatrixXd doc_topic;   // D x k
  Eigen::VectorXi topic_totals;
  std::vector<std::vector<int>> assignments;
};

/// Labeled LDA: one topic per label, tokens may only take their document's labels.
struct LldaModel {
  std::vector<std::string> labels;
  double alpha = 0.0;
  double beta = 0.0;
  int iterations = 0;
  std::uint64_t seed = 0;
  Vocabulary vocabulary;
  RowMatrixXd label_word;  // L x V
  Eigen::VectorXi label_totals;
  std::vector<std::vector<int>> assignments;

  std::optional<int> label_index(const std::string& label) const;
  std::optional<int> term_index(const std::string& term) const;
  /// Probability the model assigns to a word never observed under `label`.
  double unseen_probability(int label) const;
  /// P(term | label); out-of-vocabulary terms get unseen_probability().
  double word_probability(int label, const std::string& term) const;
};

/// Dirichlet-smoothed row normalization: (c + prior) / (rowsum(c) + cols * prior).
template <typename Derived>
RowMatrixXd smoothed_rows(const Eigen::MatrixBase<Derived>& counts, double prior) {
  const auto smoothed = counts.template cast<double>().array() + prior;
  const Eigen::VectorXd totals =
      counts.template cast<double>().rowwise().sum().array() + static_cast<double>(counts.cols()) * prior;
  return (smoothed.colwise() / totals.array()).matrix();
}

/// Collapsed Gibbs sampling for `iterations` full sweeps from a random
/// initialization determined by `config.seed`. Throws InvalidK / EmptyCorpus.
LdaModel fit_lda(const Corpus& corpus, int k, const GibbsConfig& config);

/// Labeled LDA by constrained collapsed Gibbs sampling. Throws EmptyCorpus
/// or UnlabeledDocument.
LldaModel fit_llda(const Corpus& corpus, const GibbsConfig& config);

/// Top `n` terms of one probability row, ties broken by term ascending.
KeywordList top_terms(const Eigen::Ref<const Eigen::RowVectorXd>& row,
                      const std::vector<std::string>& terms, std::size_t n);

/// Throws IndexOutOfRange for an invalid topic or label index.
KeywordList top_words(const LdaModel& model, int topic, std::size_t n);
KeywordList top_words(const LldaModel& model, int label, std::size_t n);

/// Canonical JSON dump (full precision) used for determinism checks and export.
std::string dump_model(const LdaModel& model);
std::string dump_model(const LldaModel& model);

}  // namespace curricula::text
