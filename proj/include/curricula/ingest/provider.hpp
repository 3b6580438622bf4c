#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "curricula/ingest/record.hpp"

namespace curricula::ingest {

/// Source of external educational content.
class ContentProvider {
 public:
  virtual ~ContentProvider() = default;

  /// Videos found for a playlist search. `min_results` is a fetch target;
  /// providers may return fewer. Throws ProviderUnavailable.
  virtual std::vector<ContentRecord> search_videos(const std::string& query, std::size_t min_results) = 0;
  /// Encyclopedia articles for a title. Throws ProviderUnavailable.
  virtual std::vector<ContentRecord> search_articles(const std::string& title) = 0;
  /// The record published at `url`, if the provider knows it.
  virtual std::optional<ContentRecord> lookup_url(const std::string& url);
};

/// Offline provider over a directory of *.jsonl files, one record per line.
/// A query matches records whose playlist_query equals it exactly; results
/// are sorted by id.
class FixtureProvider final : public ContentProvider {
 public:
  /// Loads the directory eagerly. A missing directory is not an error until
  /// the first search. Malformed lines throw MalformedRow with file:line.
  explicit FixtureProvider(std::filesystem::path directory);

  std::vector<ContentRecord> search_videos(const std::string& query, std::size_t min_results) override;
  std::vector<ContentRecord> search_articles(const std::string& title) override;
  std::optional<ContentRecord> lookup_url(const std::string& url) override;

  const std::vector<ContentRecord>& records() const noexcept { return records_; }

 private:
  std::vector<ContentRecord> search(RecordKind kind, const std::string& query) const;

  std::filesystem::path directory_;
  bool available_ = false;
  std::vector<ContentRecord> records_;
};

/// Placeholder for real platform adapters. Every call reports the provider as
/// unavailable; the service selects it only when live mode is configured.
class LiveProvider final : public ContentProvider {
 public:
  std::vector<ContentRecord> search_videos(const std::string& query, std::size_t min_results) override;
  std::vector<ContentRecord> search_articles(const std::string& title) override;
  std::optional<ContentRecord> lookup_url(const std::string& url) override;
};

struct QueryLogEntry {
  std::string kind;  // "videos" or "articles"
  std::string query;
  std::chrono::sys_seconds at{};
  std::size_t results = 0;

  friend bool operator==(const QueryLogEntry&, const QueryLogEntry&) = default;
};

/// Append-only record of provider queries. Thread-safe.
class ProviderQueryLog {
 public:
  void append(QueryLogEntry entry);
  std::vector<QueryLogEntry> entries() const;

 private:
  mutable std::mutex mutex_;
  std::vector<QueryLogEntry> entries_;
};

using Clock = std::function<std::chrono::sys_seconds()>;

/// Memoizes another provider per (kind, query) and logs every upstream call.
class CachingProvider final : public ContentProvider {
 public:
  CachingProvider(std::shared_ptr<ContentProvider> inner, std::shared_ptr<ProviderQueryLog> log, Clock clock);

  std::vector<ContentRecord> search_videos(const std::string& query, std::size_t min_results) override;
  std::vector<ContentRecord> search_articles(const std::string& title) override;
  /// Not cached.
  std::optional<ContentRecord> lookup_url(const std::string& url) override;

  std::size_t upstream_calls() const;

 private:
  std::vector<ContentRecord> cached(const std::string& kind, const std::string& query,
                                    const std::function<std::vector<ContentRecord>()>& fetch);

  std::shared_ptr<ContentProvider> inner_;
  std::shared_ptr<ProviderQueryLog> log_;
  Clock clock_;
  mutable std::mutex mutex_;
  std::map<std::pair<std::string, std::string>, std::vector<ContentRecord>> cache_;
  std::size_t upstream_calls_ = 0;
};

}  // namespace curricula::ingest
