#include "curricula/ingest/provider.hpp"

#include <algorithm>
#include <fstream>

#include "curricula/error.hpp"

namespace curricula::ingest {

namespace fs = std::filesystem;

FixtureProvider::FixtureProvider(fs::path directory) : directory_(std::move(directory)) {
  std::error_code ec;
  if (!fs::is_directory(directory_, ec)) return;
  available_ = true;

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(directory_))
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  for (const auto& file : files) {
    std::ifstream in(file);
    std::string line;
    for (int number = 1; std::getline(in, line); ++number) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        records_.push_back(record_from_json(nlohmann::json::parse(line)));
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedRow, file.filename().string() + ":" + std::to_string(number) + ": " + e.what());
      } catch (const Error& e) {
        throw Error(ErrorCode::MalformedRow, file.filename().string() + ":" + std::to_string(number) + ": " + e.detail());
      }
    }
  }
  std::stable_sort(records_.begin(), records_.end(),
                   [](const ContentRecord& a, const ContentRecord& b) { return a.id < b.id; });
}

std::vector<ContentRecord> FixtureProvider::search(RecordKind kind, const std::string& query) const {
  if (!available_) throw Error(ErrorCode::ProviderUnavailable, "fixture directory " + directory_.string() + " not found");
  std::vector<ContentRecord> out;
  for (const auto& r : records_)
    if (r.kind == kind && r.playlist_query == query) out.push_back(r);
  return out;
}

std::vector<ContentRecord> FixtureProvider::search_videos(const std::string& query, std::size_t) {
  return search(RecordKind::video, query);
}

std::vector<ContentRecord> FixtureProvider::search_articles(const std::string& title) {
  return search(RecordKind::article, title);
}

std::optional<ContentRecord> ContentProvider::lookup_url(const std::string&) { return std::nullopt; }

std::optional<ContentRecord> FixtureProvider::lookup_url(const std::string& url) {
  if (!available_) throw Error(ErrorCode::ProviderUnavailable, "fixture directory " + directory_.string() + " not found");
  for (const auto& r : records_)
    if (r.url == url) return r;
  return std::nullopt;
}

std::optional<ContentRecord> LiveProvider::lookup_url(const std::string&) {
  throw Error(ErrorCode::ProviderUnavailable, "live URL import is not configured");
}

std::vector<ContentRecord> LiveProvider::search_videos(const std::string&, std::size_t) {
  throw Error(ErrorCode::ProviderUnavailable, "live video provider is not configured");
}

std::vector<ContentRecord> LiveProvider::search_articles(const std::string&) {
  throw Error(ErrorCode::ProviderUnavailable, "live article provider is not configured");
}

void ProviderQueryLog::append(QueryLogEntry entry) {
  std::lock_guard lock(mutex_);
  entries_.push_back(std::move(entry));
}

std::vector<QueryLogEntry> ProviderQueryLog::entries() const {
  std::lock_guard lock(mutex_);
  return entries_;
}

CachingProvider::CachingProvider(std::shared_ptr<ContentProvider> inner, std::shared_ptr<ProviderQueryLog> log,
                                 Clock clock)
    : inner_(std::move(inner)), log_(std::move(log)), clock_(std::move(clock)) {}

std::vector<ContentRecord> CachingProvider::cached(const std::string& kind, const std::string& query,
                                                   const std::function<std::vector<ContentRecord>()>& fetch) {
  const auto key = std::make_pair(kind, query);
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  // Fetch outside the lock; concurrent misses on one key store identical values.
  auto records = fetch();
  if (log_) log_->append({kind, query, clock_ ? clock_() : std::chrono::sys_seconds{}, records.size()});
  std::lock_guard lock(mutex_);
  ++upstream_calls_;
  cache_[key] = records;
  return records;
}

std::vector<ContentRecord> CachingProvider::search_videos(const std::string& query, std::size_t min_results) {
  return cached("videos", query, [&] { return inner_->search_videos(query, min_results); });
}

std::vector<ContentRecord> CachingProvider::search_articles(const std::string& title) {
  return cached("articles", title, [&] { return inner_->search_articles(title); });
}

std::optional<ContentRecord> CachingProvider::lookup_url(const std::string& url) { return inner_->lookup_url(url); }

std::size_t CachingProvider::upstream_calls() const {
  std::lock_guard lock(mutex_);
  return upstream_calls_;
}

}  // namespace curricula::ingest
