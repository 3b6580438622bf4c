#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "curricula/esco/taxonomy.hpp"
#include "curricula/ingest/provider.hpp"
#include "curricula/service/config.hpp"
#include "curricula/text/topic_model.hpp"

namespace curricula::service {

/// Read-only recommendation entry points shared by the HTTP jobs and the CLI.
/// Results are JSON in the shape the API returns.
class Recommendations {
 public:
  Recommendations(AppConfig config, std::shared_ptr<ingest::ContentProvider> provider,
                  std::shared_ptr<const esco::Taxonomy> taxonomy);

  /// Throws EmptyTaxonomy when no taxonomy is loaded.
  nlohmann::json skills_for_goal(const std::string& title) const;
  nlohmann::json autocomplete(const std::string& prefix, const std::vector<std::string>& local_skills) const;

  nlohmann::json topics_for_skill(const std::string& skill_title, const std::vector<std::string>& existing_topics);

  /// `topic_titles` are the labels of the LLDA model used for relevance.
  nlohmann::json resources_for_topic(const std::string& topic_title, const std::vector<std::string>& topic_titles);

  /// Ranks `topics` (id -> title) for a package's resource texts.
  nlohmann::json topics_for_package(const std::vector<std::string>& texts, const std::map<std::string, std::string>& topics,
                                    std::size_t top_n);

  /// Form fields for a URL known to the provider. Throws UnknownResource.
  nlohmann::json import_url(const std::string& url);

  /// LLDA over provider transcripts labeled with the given topic titles,
  /// memoized per title set.
  std::shared_ptr<const text::LldaModel> topic_model(std::vector<std::string> topic_titles);

  const AppConfig& config() const noexcept { return config_; }

 private:
  AppConfig config_;
  std::shared_ptr<ingest::ContentProvider> provider_;
  std::shared_ptr<const esco::Taxonomy> taxonomy_;
  std::mutex models_mutex_;
  std::map<std::vector<std::string>, std::shared_ptr<const text::LldaModel>> models_;
};

/// Provider selected by the config, wrapped in a query cache.
std::shared_ptr<ingest::ContentProvider> make_provider(const AppConfig& config, ingest::Clock clock);

/// The configured taxonomy, or null when none is configured.
std::shared_ptr<const esco::Taxonomy> load_configured_taxonomy(const AppConfig& config);

}  // namespace curricula::service
