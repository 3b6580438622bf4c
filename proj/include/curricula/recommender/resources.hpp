#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "curricula/ingest/provider.hpp"
#include "curricula/text/preprocess.hpp"
#include "curricula/text/topic_model.hpp"

namespace curricula::recommender {

/// Feature names understood by the quality model.
inline constexpr const char* kQualityFeatures[] = {"log_views",   "like_ratio",         "duration_minutes",
                                                   "description_length_words", "title_length_words",
                                                   "has_transcript"};

/// Linear-logistic metadata quality model.
struct QualityModel {
  std::map<std::string, double> weights;
  double bias = 0.0;
  double threshold = 0.5;

  /// Weights shipped as the service default.
  static QualityModel defaults();
  /// Throws InvalidConfig when the threshold is outside (0, 1).
  void validate() const;

  friend bool operator==(const QualityModel&, const QualityModel&) = default;
};

using QualityFeatures = std::map<std::string, double>;

/// The six metadata features of a record. Absent counts and durations are
/// taken as zero.
QualityFeatures quality_features(const ingest::ContentRecord& record);

/// logistic(w . x + bias). Throws MissingFeature when a weighted feature is
/// absent from `features`.
double quality_score(const QualityFeatures& features, const QualityModel& model);

struct Relevance {
  double posterior = 0.0;
  bool is_top = false;
  /// Posterior of every label, in model label order; sums to one.
  Eigen::VectorXd posteriors;
};

/// Softmax over labels of the summed log-probabilities of `tokens`. is_top
/// requires the target to be the unique argmax. Throws UnknownLabel,
/// EmptyTokenList.
Relevance relevance_score(const text::TokenList& tokens, const std::string& target_label,
                          const text::LldaModel& model);

struct ResourceRecommendation {
  ingest::ContentRecord record;
  double quality_score = 0.0;
  double relevance_score = 0.0;
  bool is_top = false;
  bool passed = false;
};

struct GateConfig {
  double relevance_threshold = 0.3;
  text::PreprocessConfig preprocess = text::PreprocessConfig::defaults();
};

/// Scores every video and article found for the topic title. A candidate
/// passes when quality >= model threshold, the topic is its top label and
/// the posterior reaches the relevance threshold. All candidates are returned,
/// best quality first; duplicates (same canonical title and URL) are dropped.
/// Throws UnknownLabel, ProviderUnavailable.
std::vector<ResourceRecommendation> recommend_resources(const std::string& topic_title,
                                                        ingest::ContentProvider& provider,
                                                        const text::LldaModel& llda, const QualityModel& quality,
                                                        const GateConfig& gate = {});

/// Re-applies the gate to already scored candidates.
bool passes_gate(const ResourceRecommendation& r, double quality_threshold, double relevance_threshold);

struct LabelScore {
  std::string label;
  double posterior = 0.0;

  friend bool operator==(const LabelScore&, const LabelScore&) = default;
};

/// Ranks model labels for a package's combined resource text. Throws
/// EmptyTokenList.
std::vector<LabelScore> recommend_topics_for_package(const std::vector<std::string>& resource_texts,
                                                     const text::LldaModel& llda,
                                                     const text::PreprocessConfig& config, std::size_t top_n = 5);

}  // namespace curricula::recommender
