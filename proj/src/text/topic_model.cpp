#include "curricula/text/topic_model.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include <json.hpp>

#include "curricula/error.hpp"

namespace curricula::text {
namespace {

// mt19937_64 output is fixed by the standard; the double conversion is done by
// hand so results do not depend on the library's distribution implementation.
class ChainRng {
 public:
  explicit ChainRng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  int below(int n) { return static_cast<int>(uniform() * n); }

 private:
  std::mt19937_64 engine_;
};

struct ChainState {
  std::vector<std::vector<int>> z;
  Eigen::MatrixXi doc_topic;   // D x K
  Eigen::MatrixXi word_topic;  // K x V, column-major so one word's counts are contiguous
  Eigen::VectorXi topic_totals;
};

// `allowed` empty means every topic is allowed for every document.
ChainState run_chain(const Corpus& corpus, int topics, std::span<const std::vector<int>> allowed,
                     double alpha, double beta, int iterations, std::uint64_t seed) {
  const int n_docs = static_cast<int>(corpus.documents.size());
  const int vocab = corpus.vocabulary.size();
  const double vbeta = beta * vocab;

  std::vector<int> all_topics(static_cast<std::size_t>(topics));
  std::iota(all_topics.begin(), all_topics.end(), 0);
  auto allowed_for = [&](int d) -> const std::vector<int>& {
    return allowed.empty() ? all_topics : allowed[static_cast<std::size_t>(d)];
  };

  ChainState s;
  s.doc_topic = Eigen::MatrixXi::Zero(n_docs, topics);
  s.word_topic = Eigen::MatrixXi::Zero(topics, vocab);
  s.topic_totals = Eigen::VectorXi::Zero(topics);
  s.z.resize(static_cast<std::size_t>(n_docs));

  ChainRng rng(seed);
  for (int d = 0; d < n_docs; ++d) {
    const auto& doc = corpus.documents[static_cast<std::size_t>(d)];
    const auto& choices = allowed_for(d);
    auto& zd = s.z[static_cast<std::size_t>(d)];
    zd.resize(doc.size());
    for (std::size_t i = 0; i < doc.size(); ++i) {
      const int t = choices[static_cast<std::size_t>(rng.below(static_cast<int>(choices.size())))];
      zd[i] = t;
      ++s.doc_topic(d, t);
      ++s.word_topic(t, doc[i]);
      ++s.topic_totals(t);
    }
  }

  std::vector<double> cumulative(static_cast<std::size_t>(topics));
  for (int sweep = 0; sweep < iterations; ++sweep) {
    for (int d = 0; d < n_docs; ++d) {
      const auto& doc = corpus.documents[static_cast<std::size_t>(d)];
      const auto& choices = allowed_for(d);
      const auto n_choices = choices.size();
      auto& zd = s.z[static_cast<std::size_t>(d)];
      for (std::size_t i = 0; i < doc.size(); ++i) {
        const int w = doc[i];
        const int old = zd[i];
        --s.doc_topic(d, old);
        --s.word_topic(old, w);
        --s.topic_totals(old);

        const int* wt = s.word_topic.col(w).data();
        double total = 0.0;
        for (std::size_t c = 0; c < n_choices; ++c) {
          const int t = choices[c];
          total += (s.doc_topic(d, t) + alpha) * (wt[t] + beta) / (s.topic_totals(t) + vbeta);
          cumulative[c] = total;
        }
        const double u = rng.uniform() * total;
        std::size_t pick = 0;
        while (pick + 1 < n_choices && cumulative[pick] <= u) ++pick;
        const int t = choices[pick];

        zd[i] = t;
        ++s.doc_topic(d, t);
        ++s.word_topic(t, w);
        ++s.topic_totals(t);
      }
    }
  }
  return s;
}

nlohmann::json matrix_json(const RowMatrixXd& m) {
  auto rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

LdaModel fit_lda(const Corpus& corpus, int k, const GibbsConfig& config) {
  if (k < 1) throw Error(ErrorCode::InvalidK, "k must be at least 1, got " + std::to_string(k));
  if (corpus.documents.empty() || corpus.token_count() == 0)
    throw Error(ErrorCode::EmptyCorpus, "cannot fit LDA on an empty corpus");

  LdaModel model;
  model.k = k;
  model.alpha = config.alpha_for(k);
  model.beta = config.beta;
  model.iterations = config.iterations;
  model.seed = config.seed;
  model.vocabulary = corpus.vocabulary;

  auto state = run_chain(corpus, k, {}, model.alpha, model.beta, config.iterations, config.seed);
  model.topic_word = smoothed_rows(state.word_topic, model.beta);
  model.doc_topic = smoothed_rows(state.doc_topic, model.alpha);
  model.topic_totals = state.topic_totals;
  model.assignments = std::move(state.z);
  return model;
}

LldaModel fit_llda(const Corpus& corpus, const GibbsConfig& config) {
  if (corpus.documents.empty() || corpus.token_count() == 0)
    throw Error(ErrorCode::EmptyCorpus, "cannot fit labeled LDA on an empty corpus");
  if (!corpus.labeled() || corpus.labels.size() != corpus.documents.size())
    throw Error(ErrorCode::UnlabeledDocument, "corpus carries no label sets");
  for (std::size_t d = 0; d < corpus.labels.size(); ++d)
    if (corpus.labels[d].empty())
      throw Error(ErrorCode::UnlabeledDocument, "document " + std::to_string(d) + " has no labels");

  const int n_labels = static_cast<int>(corpus.label_names.size());
  LldaModel model;
  model.labels = corpus.label_names;
  model.alpha = config.alpha_for(n_labels);
  model.beta = config.beta;
  model.iterations = config.iterations;
  model.seed = config.seed;
  model.vocabulary = corpus.vocabulary;

  auto state = run_chain(corpus, n_labels, corpus.labels, model.alpha, model.beta, config.iterations,
                         config.seed);
  model.label_word = smoothed_rows(state.word_topic, model.beta);
  model.label_totals = state.topic_totals;
  model.assignments = std::move(state.z);
  return model;
}

std::optional<int> LldaModel::label_index(const std::string& label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) return std::nullopt;
  return static_cast<int>(it - labels.begin());
}

std::optional<int> LldaModel::term_index(const std::string& term) const {
  return vocabulary.find(term);
}

double LldaModel::unseen_probability(int label) const {
  const double vocab = static_cast<double>(vocabulary.size());
  return beta / (label_totals(label) + vocab * beta);
}

double LldaModel::word_probability(int label, const std::string& term) const {
  if (auto w = term_index(term)) return label_word(label, *w);
  return unseen_probability(label);
}

KeywordList top_terms(const Eigen::Ref<const Eigen::RowVectorXd>& row,
                      const std::vector<std::string>& terms, std::size_t n) {
  KeywordList all;
  all.reserve(terms.size());
  for (Eigen::Index w = 0; w < row.size(); ++w)
    if (row(w) > 0.0) all.push_back({terms[static_cast<std::size_t>(w)], row(w)});
  const std::size_t keep = std::min(n, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(),
                    [](const Keyword& a, const Keyword& b) {
                      if (a.weight != b.weight) return a.weight > b.weight;
                      return a.term < b.term;
                    });
  all.resize(keep);
  return all;
}

KeywordList top_words(const LdaModel& model, int topic, std::size_t n) {
  if (topic < 0 || topic >= model.k)
    throw Error(ErrorCode::IndexOutOfRange, "topic " + std::to_string(topic));
  return top_terms(model.topic_word.row(topic), model.vocabulary.terms(), n);
}

KeywordList top_words(const LldaModel& model, int label, std::size_t n) {
  if (label < 0 || label >= static_cast<int>(model.labels.size()))
    throw Error(ErrorCode::IndexOutOfRange, "label " + std::to_string(label));
  return top_terms(model.label_word.row(label), model.vocabulary.terms(), n);
}

std::string dump_model(const LdaModel& model) {
  nlohmann::ordered_json j;
  j["kind"] = "lda";
  j["k"] = model.k;
  j["alpha"] = model.alpha;
  j["beta"] = model.beta;
  j["iterations"] = model.iterations;
  j["seed"] = model.seed;
  j["terms"] = model.vocabulary.terms();
  j["topic_word"] = matrix_json(model.topic_word);
  j["doc_topic"] = matrix_json(model.doc_topic);
  j["assignments"] = model.assignments;
  return j.dump();
}

std::string dump_model(const LldaModel& model) {
  nlohmann::ordered_json j;
  j["kind"] = "llda";
  j["labels"] = model.labels;
  j["alpha"] = model.alpha;
  j["beta"] = model.beta;
  j["iterations"] = model.iterations;
  j["seed"] = model.seed;
  j["terms"] = model.vocabulary.terms();
  j["label_word"] = matrix_json(model.label_word);
  j["assignments"] = model.assignments;
  return j.dump();
}

}  // namespace curricula::text
