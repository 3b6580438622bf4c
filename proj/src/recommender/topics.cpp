#include "curricula/recommender/topics.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "curricula/core/canonical.hpp"
#include "curricula/error.hpp"

namespace curricula::recommender {

std::string_view to_string(CandidateSource source) noexcept {
  switch (source) {
    case CandidateSource::llda: return "llda";
    case CandidateSource::lda: return "lda";
    case CandidateSource::tfidf: return "tfidf";
  }
  return "";
}

text::KeywordList seed_topics_for_new_skill(const std::string& skill_title, ingest::ContentProvider& provider,
                                            const text::PreprocessConfig& config, std::size_t top_n) {
  const auto videos = provider.search_videos(skill_title, 1);
  if (videos.empty()) throw Error(ErrorCode::ProviderEmpty, "no videos found for '" + skill_title + "'");
  std::vector<text::TokenList> titles;
  for (const auto& v : videos) titles.push_back(text::preprocess(v.title, config));
  return text::tfidf_keywords(titles, top_n);
}

namespace {

std::set<std::string> topic_keys(std::span<const std::string> existing_topics, const text::PreprocessConfig& config) {
  std::set<std::string> keys;
  for (const auto& title : existing_topics) {
    keys.insert(core::canonical_title(title));
    for (const auto& token : text::preprocess(title, config)) keys.insert(core::canonical_title(token));
  }
  return keys;
}

}  // namespace

bool collides_with_topic(const std::string& term, std::span<const std::string> existing_topics,
                         const text::PreprocessConfig& config) {
  return topic_keys(existing_topics, config).contains(core::canonical_title(term));
}

std::vector<TopicCandidate> merge_candidates(std::vector<TopicCandidate> candidates) {
  std::map<std::string, TopicCandidate> best;
  for (auto& c : candidates) {
    auto [it, inserted] = best.try_emplace(c.term, c);
    if (!inserted && c.probability > it->second.probability) it->second = std::move(c);
  }
  std::vector<TopicCandidate> out;
  out.reserve(best.size());
  for (auto& [term, c] : best) out.push_back(std::move(c));
  std::stable_sort(out.begin(), out.end(), [](const TopicCandidate& a, const TopicCandidate& b) {
    return a.probability > b.probability;
  });
  return out;
}

TopicRecommendations build_topic_recommendations(const std::string& skill_title,
                                                 std::span<const std::string> existing_topics,
                                                 ingest::ContentProvider& provider,
                                                 const TopicPipelineConfig& config) {
  TopicRecommendations result;
  std::vector<TopicCandidate> pool;

  // Labeled transcripts of the topics the skill already has.
  auto labeled = ingest::labeled_corpus_for_topics(provider, existing_topics, config.preprocess,
                                                   config.min_labeled_per_topic);
  result.shortfalls = std::move(labeled.shortfalls);
  const bool have_labeled = !labeled.corpus.documents.empty() && labeled.corpus.token_count() > 0;
  if (have_labeled) {
    const auto llda = text::fit_llda(labeled.corpus, config.gibbs);
    for (int l = 0; l < static_cast<int>(llda.labels.size()); ++l)
      for (const auto& kw : text::top_words(llda, l, config.words_per_topic))
        pool.push_back({kw.term, kw.weight, CandidateSource::llda});
  }

  // Unlabeled skill-level videos.
  const auto videos = provider.search_videos(skill_title, config.min_skill_videos);
  if (videos.size() < config.min_skill_videos)
    result.shortfalls.push_back({skill_title, videos.size(), config.min_skill_videos});
  std::vector<text::TokenList> docs;
  for (const auto& v : videos) docs.push_back(text::preprocess(v.transcript_or_body, config.preprocess));
  const auto corpus = text::Corpus::from_tokens(docs);
  if (corpus.token_count() > 0) {
    const auto selected = text::select_k(corpus, config.k_min, config.k_max, config.gibbs, config.coherence,
                                         config.words_per_topic);
    result.coherence = selected.report;
    for (int t = 0; t < selected.model.k; ++t)
      for (const auto& kw : text::top_words(selected.model, t, config.words_per_topic))
        pool.push_back({kw.term, kw.weight, CandidateSource::lda});
  } else if (!have_labeled) {
    throw Error(ErrorCode::ProviderEmpty, "no transcripts found for '" + skill_title + "' or its topics");
  }

  const auto keys = topic_keys(existing_topics, config.preprocess);
  std::erase_if(pool, [&](const TopicCandidate& c) {
    return c.probability <= 0.0 || keys.contains(core::canonical_title(c.term));
  });
  result.candidates = merge_candidates(std::move(pool));
  return result;
}

}  // namespace curricula::recommender
