#include "curricula/ingest/ingest.hpp"

#include <algorithm>

namespace curricula::ingest {

LabeledCorpus labeled_corpus_for_topics(ContentProvider& provider, std::span<const std::string> topic_titles,
                                        const text::PreprocessConfig& config, std::size_t min_per_topic) {
  LabeledCorpus out;
  std::vector<text::TokenList> documents;
  std::vector<std::vector<std::string>> labels;
  for (const auto& topic : topic_titles) {
    const auto records = provider.search_videos(topic, min_per_topic);
    for (const auto& r : records) {
      documents.push_back(text::preprocess(r.transcript_or_body, config));
      labels.push_back({topic});
    }
    if (records.size() < min_per_topic) out.shortfalls.push_back({topic, records.size(), min_per_topic});
  }
  if (!documents.empty()) out.corpus = text::Corpus::from_labeled(documents, labels);
  return out;
}

core::NewResource extract_properties(const ContentRecord& record) {
  core::NewResource r;
  r.origin = {core::ResourceOrigin::Kind::url_import, record.url, ""};
  r.title = record.title;
  r.description = record.description;
  r.source = record.source_name;
  if (record.kind == RecordKind::video) {
    r.format_type = core::FormatType::video;
    const long seconds = std::max(0L, record.duration_seconds.value_or(0));
    r.estimated_minutes = static_cast<int>((seconds + 59) / 60);
  } else {
    r.format_type = core::FormatType::text;
    const auto words = static_cast<long>(text::split_whitespace(record.transcript_or_body).size());
    r.estimated_minutes = static_cast<int>((words + 199) / 200);
  }
  return r;
}

}  // namespace curricula::ingest
