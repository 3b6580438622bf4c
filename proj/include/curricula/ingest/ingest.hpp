#pragma once

#include <span>
#include <string>
#include <vector>

#include "curricula/core/store.hpp"
#include "curricula/ingest/provider.hpp"
#include "curricula/text/corpus.hpp"
#include "curricula/text/preprocess.hpp"

namespace curricula::ingest {

struct Shortfall {
  std::string topic;
  std::size_t found = 0;
  std::size_t wanted = 0;

  friend bool operator==(const Shortfall&, const Shortfall&) = default;
};

struct LabeledCorpus {
  text::Corpus corpus;
  /// Topics that returned fewer than the requested number of transcripts.
  std::vector<Shortfall> shortfalls;
};

/// One document per (topic, video returned for the topic title), labeled with
/// the topic title. Topics below `min_per_topic` are kept and reported.
/// Throws ProviderUnavailable.
LabeledCorpus labeled_corpus_for_topics(ContentProvider& provider, std::span<const std::string> topic_titles,
                                        const text::PreprocessConfig& config, std::size_t min_per_topic = 50);

/// Resource form fields derivable from a record: title, description, source,
/// URL origin, format and estimated minutes (ceil(seconds / 60) for videos,
/// ceil(words / 200) for articles). Pedagogical flags stay at their defaults
/// for the author to set.
core::NewResource extract_properties(const ContentRecord& record);

}  // namespace curricula::ingest
