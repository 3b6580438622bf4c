#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace curricula::ingest {

enum class RecordKind { video, article };

/// One item fetched from a content provider.
struct ContentRecord {
  std::string id;
  RecordKind kind = RecordKind::video;
  std::string title;
  std::string description;
  std::string source_name;
  std::string url;
  std::optional<long> duration_seconds;  // absent for articles
  std::optional<long> view_count;
  std::optional<long> like_count;
  std::string transcript_or_body;
  std::string playlist_query;
  std::vector<std::string> labels;

  friend bool operator==(const ContentRecord&, const ContentRecord&) = default;
};

std::string_view to_string(RecordKind kind) noexcept;

/// Reads the snake_case object form. Unknown fields are ignored. Throws
/// MalformedRow on missing id/kind/title or a bad kind.
ContentRecord record_from_json(const nlohmann::json& j);
nlohmann::json record_to_json(const ContentRecord& record);

}  // namespace curricula::ingest
