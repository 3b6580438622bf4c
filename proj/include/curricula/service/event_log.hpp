#pragma once

#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "curricula/core/types.hpp"

namespace curricula::service {

/// One accepted mutation. `payload` holds the command arguments; replaying
/// them in seq order rebuilds the state.
struct Event {
  long seq = 0;
  core::Timestamp timestamp{};
  std::string actor;
  std::string type;
  nlohmann::json payload = nlohmann::json::object();

  friend bool operator==(const Event&, const Event&) = default;
};

nlohmann::json event_to_json(const Event& event);
Event event_from_json(const nlohmann::json& j);

/// Writes one record: decimal byte length, newline, JSON, newline.
void write_record(std::ostream& out, const Event& event);

/// Reads records until EOF. Seqs must run 1, 2, 3, ... from `first_seq`.
/// Throws CorruptLog naming the seq of the first bad record.
std::vector<Event> read_records(std::istream& in, long first_seq = 1);

/// Append-only event log, optionally mirrored to a file.
class EventLog {
 public:
  /// In-memory log.
  EventLog() = default;
  /// Opens (or creates) the file and loads every record in it.
  explicit EventLog(const std::filesystem::path& path);

  EventLog(const EventLog&) = delete;
  EventLog& operator=(const EventLog&) = delete;

  /// Assigns the next seq, writes and flushes the record, returns it.
  const Event& append(core::Timestamp timestamp, std::string actor, std::string type, nlohmann::json payload);

  const std::vector<Event>& events() const noexcept { return events_; }
  long last_seq() const noexcept { return events_.empty() ? 0 : events_.back().seq; }
  const std::optional<std::filesystem::path>& path() const noexcept { return path_; }

 private:
  std::optional<std::filesystem::path> path_;
  std::ofstream out_;
  std::vector<Event> events_;
};

std::vector<Event> read_log_file(const std::filesystem::path& path);

}  // namespace curricula::service
