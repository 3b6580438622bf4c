#include "curricula/service/recommendations.hpp"

#include <algorithm>

#include "curricula/error.hpp"
#include "curricula/esco/matcher.hpp"
#include "curricula/ingest/ingest.hpp"
#include "curricula/recommender/resources.hpp"
#include "curricula/recommender/topics.hpp"
#include "curricula/service/serialize.hpp"

namespace curricula::service {

using nlohmann::json;

Recommendations::Recommendations(AppConfig config, std::shared_ptr<ingest::ContentProvider> provider,
                                 std::shared_ptr<const esco::Taxonomy> taxonomy)
    : config_(std::move(config)), provider_(std::move(provider)), taxonomy_(std::move(taxonomy)) {}

json Recommendations::skills_for_goal(const std::string& title) const {
  if (!taxonomy_) throw Error(ErrorCode::EmptyTaxonomy, "no taxonomy configured");
  return esco::recommend_skills(title, *taxonomy_);
}

json Recommendations::autocomplete(const std::string& prefix, const std::vector<std::string>& local_skills) const {
  static const esco::Taxonomy empty;
  return esco::autocomplete_skill(prefix, taxonomy_ ? *taxonomy_ : empty, local_skills);
}

json Recommendations::topics_for_skill(const std::string& skill_title, const std::vector<std::string>& existing) {
  const auto rec = recommender::build_topic_recommendations(skill_title, existing, *provider_, config_.pipeline());
  json shortfalls = json::array();
  for (const auto& s : rec.shortfalls)
    shortfalls.push_back({{"topic", s.topic}, {"found", s.found}, {"wanted", s.wanted}});
  json scores = json::object();
  for (const auto& [k, v] : rec.coherence.scores) scores[std::to_string(k)] = v;
  return {{"skill", skill_title},
          {"candidates", rec.candidates},
          {"shortfalls", shortfalls},
          {"coherence", {{"scores", scores}, {"best_k", rec.coherence.best_k}}}};
}

std::shared_ptr<const text::LldaModel> Recommendations::topic_model(std::vector<std::string> titles) {
  std::sort(titles.begin(), titles.end());
  titles.erase(std::unique(titles.begin(), titles.end()), titles.end());
  {
    std::lock_guard lock(models_mutex_);
    if (auto it = models_.find(titles); it != models_.end()) return it->second;
  }
  const auto labeled = ingest::labeled_corpus_for_topics(*provider_, titles, config_.preprocess());
  auto model = std::make_shared<const text::LldaModel>(text::fit_llda(labeled.corpus, config_.lda));
  std::lock_guard lock(models_mutex_);
  return models_.emplace(titles, std::move(model)).first->second;
}

json Recommendations::resources_for_topic(const std::string& topic_title, const std::vector<std::string>& titles) {
  const auto model = topic_model(titles);
  const auto recs = recommender::recommend_resources(topic_title, *provider_, *model, config_.quality, config_.gate());
  return {{"topic", topic_title},
          {"quality_threshold", config_.quality.threshold},
          {"relevance_threshold", config_.relevance_threshold},
          {"resources", recs}};
}

json Recommendations::topics_for_package(const std::vector<std::string>& texts,
                                         const std::map<std::string, std::string>& topics, std::size_t top_n) {
  std::vector<std::string> titles;
  std::map<std::string, std::string> id_of;
  for (const auto& [id, title] : topics) {
    titles.push_back(title);
    id_of[title] = id;
  }
  const auto model = topic_model(titles);
  const auto scores = recommender::recommend_topics_for_package(texts, *model, config_.preprocess(), top_n);
  json out = json::array();
  for (const auto& s : scores) {
    json entry = s;
    auto it = id_of.find(s.label);
    entry["topic_id"] = it == id_of.end() ? json(nullptr) : json(it->second);
    out.push_back(entry);
  }
  return {{"topics", out}};
}

json Recommendations::import_url(const std::string& url) {
  const auto record = provider_->lookup_url(url);
  if (!record) throw Error(ErrorCode::UnknownResource, url);
  return {{"record_id", record->id}, {"resource", ingest::extract_properties(*record)}};
}

std::shared_ptr<ingest::ContentProvider> make_provider(const AppConfig& config, ingest::Clock clock) {
  std::shared_ptr<ingest::ContentProvider> inner;
  if (config.provider_mode == ProviderMode::live)
    inner = std::make_shared<ingest::LiveProvider>();
  else
    inner = std::make_shared<ingest::FixtureProvider>(config.fixture_dir);
  return std::make_shared<ingest::CachingProvider>(inner, std::make_shared<ingest::ProviderQueryLog>(),
                                                   std::move(clock));
}

std::shared_ptr<const esco::Taxonomy> load_configured_taxonomy(const AppConfig& config) {
  if (!config.has_taxonomy()) return nullptr;
  return std::make_shared<const esco::Taxonomy>(
      esco::load_taxonomy(*config.esco_occupations, *config.esco_skills, *config.esco_relations));
}

}  // namespace curricula::service
