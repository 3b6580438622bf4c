#pragma once

#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "curricula/text/corpus.hpp"
#include "curricula/text/topic_model.hpp"

namespace curricula::text {

struct CoherenceOptions {
  int window = 110;
  double epsilon = 1e-12;
  /// Exponent applied to NPMI entries of the context vectors.
  double gamma = 1.0;
};

struct CoherenceScores {
  std::vector<double> per_set;
  double mean = 0.0;
};

/// Normalized PMI matrix of a word set estimated from boolean window
/// probabilities. `joint` is the co-occurrence probability matrix with the
/// marginals on its diagonal.
Eigen::MatrixXd npmi_matrix(const Eigen::Ref<const Eigen::MatrixXd>& joint, double epsilon);

/// Indirect cosine confirmation of each word's context vector (a row of
/// `context`) against the set vector (sum of rows), averaged over words.
double indirect_cosine_mean(const Eigen::Ref<const Eigen::MatrixXd>& context);

/// C_V coherence: boolean sliding windows over `reference`, NPMI context
/// vectors, one-vs-set indirect cosine. Throws EmptyTopWords / EmptyCorpus.
CoherenceScores coherence_cv(std::span<const TokenList> top_word_sets, std::span<const TokenList> reference,
                             const CoherenceOptions& options = {});

struct CoherenceReport {
  std::map<int, double> scores;
  int best_k = 0;
};

/// Highest-scoring k; ties go to the smaller k. Throws InvalidRange when empty.
int best_k(const std::map<int, double>& scores);

struct SelectKResult {
  CoherenceReport report;
  LdaModel model;
};

/// Fits one LDA per k in [k_min, k_max] (seed = config.seed + k), scores each
/// by C_V over its top-`top_n` words against the training corpus, and returns
/// the argmax (ties toward smaller k). Throws EmptyCorpus / InvalidRange.
SelectKResult select_k(const Corpus& corpus, int k_min, int k_max, const GibbsConfig& config,
                       const CoherenceOptions& options = {}, std::size_t top_n = 10);

}  // namespace curricula::text
