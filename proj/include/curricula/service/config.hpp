#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "curricula/crowd/engine.hpp"
#include "curricula/recommender/resources.hpp"
#include "curricula/recommender/topics.hpp"
#include "curricula/text/coherence.hpp"
#include "curricula/text/topic_model.hpp"

namespace curricula::service {

enum class ProviderMode { fixture, live };

/// Service settings, read from a flat `key = value` file. Every key is
/// optional; unknown keys and badly typed values raise InvalidConfig.
struct AppConfig {
  crowd::ReviewConfig review;
  text::GibbsConfig lda;
  text::CoherenceOptions coherence;
  int k_min = 2;
  int k_max = 50;
  std::size_t words_per_topic = 10;
  recommender::QualityModel quality = recommender::QualityModel::defaults();
  double relevance_threshold = 0.3;
  ProviderMode provider_mode = ProviderMode::fixture;
  std::filesystem::path fixture_dir = "fixtures/content";
  std::optional<std::filesystem::path> stopwords;
  std::optional<std::filesystem::path> esco_occupations;
  std::optional<std::filesystem::path> esco_skills;
  std::optional<std::filesystem::path> esco_relations;
  std::filesystem::path data_dir = "data";
  std::size_t snapshot_every = 100;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t workers = 2;
  std::chrono::seconds sweep_interval{60};
  /// contributor -> bearer token
  std::map<std::string, std::string> tokens;

  text::PreprocessConfig preprocess() const;
  recommender::TopicPipelineConfig pipeline() const;
  recommender::GateConfig gate() const;
  bool has_taxonomy() const { return esco_occupations && esco_skills && esco_relations; }

  /// Cross-field checks. Throws InvalidConfig.
  void validate() const;
};

/// Parses config text. Relative paths resolve against `base_dir`.
AppConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");
AppConfig load_config(const std::filesystem::path& path);
/// Loads the file named by CURRICULA_CONFIG, or the defaults when unset.
AppConfig config_from_environment();

/// Every setting as JSON; tokens are replaced by "***".
nlohmann::json redacted(const AppConfig& config);

}  // namespace curricula::service
