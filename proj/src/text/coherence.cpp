#include "curricula/text/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "curricula/error.hpp"

namespace curricula::text {
namespace {

// Counts, over all boolean windows, how often each target word (diagonal) and
// each pair of target words (off-diagonal) appears. Documents shorter than the
// window form a single window.
struct WindowCounts {
  Eigen::MatrixXd joint;
  double windows = 0.0;
};

WindowCounts count_windows(std::span<const TokenList> reference,
                           const std::unordered_map<std::string, int>& targets, int window) {
  const auto n = static_cast<Eigen::Index>(targets.size());
  WindowCounts out{Eigen::MatrixXd::Zero(n, n), 0.0};

  std::vector<int> in_window(static_cast<std::size_t>(n), 0);
  std::vector<int> present;
  auto tally = [&] {
    out.windows += 1.0;
    for (int a : present)
      for (int b : present) out.joint(a, b) += 1.0;
  };
  auto enter = [&](int id) {
    if (id >= 0 && in_window[static_cast<std::size_t>(id)]++ == 0) present.push_back(id);
  };
  auto leave = [&](int id) {
    if (id >= 0 && --in_window[static_cast<std::size_t>(id)] == 0)
      present.erase(std::find(present.begin(), present.end(), id));
  };

  std::vector<int> ids;
  for (const auto& doc : reference) {
    if (doc.empty()) continue;
    ids.clear();
    for (const auto& token : doc) {
      auto it = targets.find(token);
      ids.push_back(it == targets.end() ? -1 : it->second);
    }
    const std::size_t span = std::min(ids.size(), static_cast<std::size_t>(window));
    for (std::size_t i = 0; i < span; ++i) enter(ids[i]);
    tally();
    for (std::size_t i = span; i < ids.size(); ++i) {
      leave(ids[i - span]);
      enter(ids[i]);
      tally();
    }
    for (std::size_t i = ids.size() - span; i < ids.size(); ++i) leave(ids[i]);
  }
  return out;
}

}  // namespace

Eigen::MatrixXd npmi_matrix(const Eigen::Ref<const Eigen::MatrixXd>& joint, double epsilon) {
  const auto n = joint.rows();
  Eigen::MatrixXd npmi(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double log_joint = std::log(joint(i, j) + epsilon);
      const double log_i = std::log(joint(i, i) + epsilon);
      const double log_j = std::log(joint(j, j) + epsilon);
      const double pmi = log_joint - log_i - log_j;
      // log_joint == 0 only when the pair fills every window, where NPMI is 1.
      npmi(i, j) = log_joint == 0.0 ? 1.0 : pmi / -log_joint;
    }
  }
  return npmi;
}

double indirect_cosine_mean(const Eigen::Ref<const Eigen::MatrixXd>& context) {
  const Eigen::RowVectorXd set_vector = context.colwise().sum();
  const double set_norm = set_vector.norm();
  double total = 0.0;
  for (Eigen::Index i = 0; i < context.rows(); ++i) {
    const double norm = context.row(i).norm();
    if (norm > 0.0 && set_norm > 0.0) total += context.row(i).dot(set_vector) / (norm * set_norm);
  }
  return total / static_cast<double>(context.rows());
}

CoherenceScores coherence_cv(std::span<const TokenList> top_word_sets, std::span<const TokenList> reference,
                             const CoherenceOptions& options) {
  if (top_word_sets.empty()) throw Error(ErrorCode::EmptyTopWords, "no word sets to score");
  for (const auto& set : top_word_sets)
    if (set.empty()) throw Error(ErrorCode::EmptyTopWords, "word set is empty");
  if (reference.empty()) throw Error(ErrorCode::EmptyCorpus, "reference corpus is empty");
  if (options.window < 1) throw Error(ErrorCode::InvalidRange, "window must be positive");

  std::unordered_map<std::string, int> targets;
  std::vector<std::vector<int>> set_ids;
  for (const auto& set : top_word_sets) {
    std::vector<int> ids;
    for (const auto& word : set) {
      const int id = targets.try_emplace(word, static_cast<int>(targets.size())).first->second;
      if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
    }
    set_ids.push_back(std::move(ids));
  }

  const WindowCounts counts = count_windows(reference, targets, options.window);
  const Eigen::MatrixXd joint =
      counts.windows > 0.0 ? Eigen::MatrixXd(counts.joint / counts.windows) : counts.joint;

  CoherenceScores scores;
  for (const auto& ids : set_ids) {
    const auto n = static_cast<Eigen::Index>(ids.size());
    Eigen::MatrixXd sub(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b) sub(a, b) = joint(ids[a], ids[b]);
    Eigen::MatrixXd context = npmi_matrix(sub, options.epsilon);
    if (options.gamma != 1.0) context = context.array().pow(options.gamma).matrix();
    scores.per_set.push_back(indirect_cosine_mean(context));
  }
  double sum = 0.0;
  for (double s : scores.per_set) sum += s;
  scores.mean = sum / static_cast<double>(scores.per_set.size());
  return scores;
}

int best_k(const std::map<int, double>& scores) {
  if (scores.empty()) throw Error(ErrorCode::InvalidRange, "no coherence scores");
  auto best = scores.begin();
  for (auto it = scores.begin(); it != scores.end(); ++it)
    if (it->second > best->second) best = it;
  return best->first;
}

SelectKResult select_k(const Corpus& corpus, int k_min, int k_max, const GibbsConfig& config,
                       const CoherenceOptions& options, std::size_t top_n) {
  if (corpus.documents.empty() || corpus.token_count() == 0)
    throw Error(ErrorCode::EmptyCorpus, "cannot select k on an empty corpus");
  if (k_min < 1 || k_min > k_max)
    throw Error(ErrorCode::InvalidRange,
                "invalid k range [" + std::to_string(k_min) + ", " + std::to_string(k_max) + "]");

  const auto reference = corpus.token_lists();
  SelectKResult result;
  for (int k = k_min; k <= k_max; ++k) {
    GibbsConfig fit_config = config;
    fit_config.seed = config.seed + static_cast<std::uint64_t>(k);
    LdaModel model = fit_lda(corpus, k, fit_config);

    std::vector<TokenList> sets;
    for (int t = 0; t < k; ++t) {
      TokenList words;
      for (const auto& kw : top_words(model, t, top_n)) words.push_back(kw.term);
      sets.push_back(std::move(words));
    }
    const double score = coherence_cv(sets, reference, options).mean;
    result.report.scores[k] = score;
    if (best_k(result.report.scores) == k) result.model = std::move(model);
  }
  result.report.best_k = best_k(result.report.scores);
  return result;
}

}  // namespace curricula::text
