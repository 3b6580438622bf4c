#pragma once

#include <span>
#include <string>
#include <vector>

#include "curricula/ingest/ingest.hpp"
#include "curricula/text/coherence.hpp"
#include "curricula/text/keywords.hpp"
#include "curricula/text/preprocess.hpp"
#include "curricula/text/topic_model.hpp"

namespace curricula::recommender {

enum class CandidateSource { llda, lda, tfidf };

std::string_view to_string(CandidateSource source) noexcept;

struct TopicCandidate {
  std::string term;
  double probability = 0.0;
  CandidateSource source = CandidateSource::lda;

  friend bool operator==(const TopicCandidate&, const TopicCandidate&) = default;
};

struct TopicPipelineConfig {
  text::PreprocessConfig preprocess = text::PreprocessConfig::defaults();
  text::GibbsConfig gibbs;
  text::CoherenceOptions coherence;
  int k_min = 2;
  int k_max = 50;
  /// Fetch targets; a shortfall is reported, not fatal.
  std::size_t min_labeled_per_topic = 50;
  std::size_t min_skill_videos = 200;
  /// Words taken from each LLDA label and each LDA topic.
  std::size_t words_per_topic = 10;
};

struct TopicRecommendations {
  /// Descending probability, ties by term ascending; one entry per term.
  std::vector<TopicCandidate> candidates;
  std::vector<ingest::Shortfall> shortfalls;
  /// Coherence per k for the skill-level LDA; empty when no videos were found.
  text::CoherenceReport coherence;
};

/// TF-IDF over the titles of the videos found for the skill title, one title
/// per document. Throws ProviderEmpty when no video is found.
text::KeywordList seed_topics_for_new_skill(const std::string& skill_title, ingest::ContentProvider& provider,
                                            const text::PreprocessConfig& config, std::size_t top_n = 10);

/// True when `term` collides with an existing topic: equal to its canonical
/// title or to one of its preprocessed tokens.
bool collides_with_topic(const std::string& term, std::span<const std::string> existing_topics,
                         const text::PreprocessConfig& config);

/// Merges candidate lists, keeping the highest probability per term, and
/// sorts by probability descending then term ascending.
std::vector<TopicCandidate> merge_candidates(std::vector<TopicCandidate> candidates);

/// Topic recommendations for a skill: LLDA over transcripts of its existing
/// topics, LDA (k chosen by C_V coherence) over the skill's playlist videos,
/// existing topics removed, merged and sorted. Throws ProviderEmpty when both
/// sources come back empty.
TopicRecommendations build_topic_recommendations(const std::string& skill_title,
                                                 std::span<const std::string> existing_topics,
                                                 ingest::ContentProvider& provider,
                                                 const TopicPipelineConfig& config = {});

}  // namespace curricula::recommender
