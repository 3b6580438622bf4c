#include "curricula/ingest/record.hpp"

#include "curricula/error.hpp"

namespace curricula::ingest {
namespace {

template <typename T>
std::optional<T> optional_field(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

std::string string_field(const nlohmann::json& j, const char* key) {
  return optional_field<std::string>(j, key).value_or("");
}

}  // namespace

std::string_view to_string(RecordKind kind) noexcept { return kind == RecordKind::video ? "video" : "article"; }

ContentRecord record_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::MalformedRow, "record is not a JSON object");
  for (const char* key : {"id", "kind", "title"})
    if (!j.contains(key) || !j[key].is_string()) throw Error(ErrorCode::MalformedRow, std::string("missing field ") + key);

  ContentRecord r;
  try {
    r.id = j["id"].get<std::string>();
    const auto kind = j["kind"].get<std::string>();
    if (kind == "video")
      r.kind = RecordKind::video;
    else if (kind == "article")
      r.kind = RecordKind::article;
    else
      throw Error(ErrorCode::MalformedRow, "unknown kind '" + kind + "'");
    r.title = j["title"].get<std::string>();
    r.description = string_field(j, "description");
    r.source_name = string_field(j, "source_name");
    r.url = string_field(j, "url");
    r.duration_seconds = optional_field<long>(j, "duration_seconds");
    r.view_count = optional_field<long>(j, "view_count");
    r.like_count = optional_field<long>(j, "like_count");
    r.transcript_or_body = string_field(j, "transcript_or_body");
    r.playlist_query = string_field(j, "playlist_query");
    r.labels = optional_field<std::vector<std::string>>(j, "labels").value_or(std::vector<std::string>{});
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedRow, e.what());
  }
  if (r.kind == RecordKind::article && r.duration_seconds)
    throw Error(ErrorCode::MalformedRow, "article " + r.id + " has a duration");
  return r;
}

nlohmann::json record_to_json(const ContentRecord& r) {
  nlohmann::json j = {{"id", r.id},
                      {"kind", to_string(r.kind)},
                      {"title", r.title},
                      {"description", r.description},
                      {"source_name", r.source_name},
                      {"url", r.url},
                      {"transcript_or_body", r.transcript_or_body},
                      {"playlist_query", r.playlist_query},
                      {"labels", r.labels}};
  j["duration_seconds"] = r.duration_seconds ? nlohmann::json(*r.duration_seconds) : nlohmann::json();
  j["view_count"] = r.view_count ? nlohmann::json(*r.view_count) : nlohmann::json();
  j["like_count"] = r.like_count ? nlohmann::json(*r.like_count) : nlohmann::json();
  return j;
}

}  // namespace curricula::ingest
