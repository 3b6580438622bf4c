#include "curricula/recommender/resources.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "curricula/core/canonical.hpp"
#include "curricula/error.hpp"

namespace curricula::recommender {
namespace {

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

Eigen::VectorXd log_likelihoods(const text::TokenList& tokens, const text::LldaModel& model) {
  const auto labels = static_cast<Eigen::Index>(model.labels.size());
  Eigen::VectorXd ll = Eigen::VectorXd::Zero(labels);
  for (const auto& token : tokens) {
    const auto term = model.term_index(token);
    for (Eigen::Index l = 0; l < labels; ++l)
      ll(l) += std::log(term ? model.label_word(l, *term) : model.unseen_probability(static_cast<int>(l)));
  }
  return ll;
}

Eigen::VectorXd softmax(const Eigen::VectorXd& x) {
  const Eigen::ArrayXd e = (x.array() - x.maxCoeff()).exp();
  return (e / e.sum()).matrix();
}

Eigen::VectorXd label_posteriors(const text::TokenList& tokens, const text::LldaModel& model) {
  if (tokens.empty()) throw Error(ErrorCode::EmptyTokenList, "nothing to score");
  if (model.labels.empty()) throw Error(ErrorCode::UnknownLabel, "model has no labels");
  return softmax(log_likelihoods(tokens, model));
}

std::string record_text(const ingest::ContentRecord& r) {
  return r.title + "\n" + r.description + "\n" + r.transcript_or_body;
}

}  // namespace

QualityModel QualityModel::defaults() {
  return {{{"log_views", 0.9},
           {"like_ratio", 25.0},
           {"duration_minutes", 0.02},
           {"description_length_words", 0.03},
           {"title_length_words", 0.05},
           {"has_transcript", 1.0}},
          -6.0,
          0.5};
}

void QualityModel::validate() const {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw Error(ErrorCode::InvalidConfig, "quality threshold must lie in (0, 1)");
}

QualityFeatures quality_features(const ingest::ContentRecord& r) {
  const double views = static_cast<double>(std::max(0L, r.view_count.value_or(0)));
  const double likes = static_cast<double>(std::max(0L, r.like_count.value_or(0)));
  return {{"log_views", std::log10(1.0 + views)},
          {"like_ratio", views > 0.0 ? likes / views : 0.0},
          {"duration_minutes", static_cast<double>(std::max(0L, r.duration_seconds.value_or(0))) / 60.0},
          {"description_length_words", static_cast<double>(text::split_whitespace(r.description).size())},
          {"title_length_words", static_cast<double>(text::split_whitespace(r.title).size())},
          {"has_transcript", r.transcript_or_body.find_first_not_of(" \t\r\n") != std::string::npos ? 1.0 : 0.0}};
}

double quality_score(const QualityFeatures& features, const QualityModel& model) {
  double z = model.bias;
  for (const auto& [name, weight] : model.weights) {
    auto it = features.find(name);
    if (it == features.end()) throw Error(ErrorCode::MissingFeature, name);
    z += weight * it->second;
  }
  return logistic(z);
}

Relevance relevance_score(const text::TokenList& tokens, const std::string& target_label,
                          const text::LldaModel& model) {
  const auto target = model.label_index(target_label);
  if (!target) throw Error(ErrorCode::UnknownLabel, target_label);
  Relevance r;
  r.posteriors = label_posteriors(tokens, model);
  r.posterior = r.posteriors(*target);
  const auto ties = (r.posteriors.array() >= r.posterior).count();
  r.is_top = ties == 1;
  return r;
}

bool passes_gate(const ResourceRecommendation& r, double quality_threshold, double relevance_threshold) {
  return r.quality_score >= quality_threshold && r.is_top && r.relevance_score >= relevance_threshold;
}

std::vector<ResourceRecommendation> recommend_resources(const std::string& topic_title,
                                                        ingest::ContentProvider& provider,
                                                        const text::LldaModel& llda, const QualityModel& quality,
                                                        const GateConfig& gate) {
  if (!llda.label_index(topic_title)) throw Error(ErrorCode::UnknownLabel, topic_title);
  auto candidates = provider.search_videos(topic_title, 1);
  for (auto& article : provider.search_articles(topic_title)) candidates.push_back(std::move(article));

  std::set<std::pair<std::string, std::string>> seen;
  std::vector<ResourceRecommendation> out;
  for (auto& record : candidates) {
    if (!seen.insert({core::canonical_title(record.title), record.url}).second) continue;
    ResourceRecommendation rec;
    rec.quality_score = quality_score(quality_features(record), quality);
    const auto tokens = text::preprocess(record_text(record), gate.preprocess);
    if (!tokens.empty()) {
      const auto relevance = relevance_score(tokens, topic_title, llda);
      rec.relevance_score = relevance.posterior;
      rec.is_top = relevance.is_top;
    }
    rec.record = std::move(record);
    rec.passed = passes_gate(rec, quality.threshold, gate.relevance_threshold);
    out.push_back(std::move(rec));
  }
  std::stable_sort(out.begin(), out.end(), [](const ResourceRecommendation& a, const ResourceRecommendation& b) {
    if (a.quality_score != b.quality_score) return a.quality_score > b.quality_score;
    return a.record.id < b.record.id;
  });
  return out;
}

std::vector<LabelScore> recommend_topics_for_package(const std::vector<std::string>& resource_texts,
                                                     const text::LldaModel& llda,
                                                     const text::PreprocessConfig& config, std::size_t top_n) {
  text::TokenList tokens;
  for (const auto& t : resource_texts) {
    auto part = text::preprocess(t, config);
    tokens.insert(tokens.end(), part.begin(), part.end());
  }
  const Eigen::VectorXd posteriors = label_posteriors(tokens, llda);
  std::vector<LabelScore> scores;
  for (std::size_t l = 0; l < llda.labels.size(); ++l)
    scores.push_back({llda.labels[l], posteriors(static_cast<Eigen::Index>(l))});
  std::stable_sort(scores.begin(), scores.end(),
                   [](const LabelScore& a, const LabelScore& b) { return a.posterior > b.posterior; });
  if (scores.size() > top_n) scores.resize(top_n);
  return scores;
}

}  // namespace curricula::recommender
