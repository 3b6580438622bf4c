#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "curricula/core/store.hpp"
#include "curricula/crowd/engine.hpp"
#include "curricula/ingest/provider.hpp"
#include "curricula/service/event_log.hpp"

namespace curricula::service {

/// Curriculum plus crowd state; the unit persisted by snapshots.
struct State {
  core::CurriculumStore store;
  crowd::CrowdEngine crowd;

  friend bool operator==(const State&, const State&) = default;
};

nlohmann::json state_to_json(const State& state);
State state_from_json(const nlohmann::json& j, const crowd::ReviewConfig& review);

/// Command types accepted by Workspace::execute and recorded in the log.
namespace commands {
inline constexpr const char* add_goal = "add_goal";
inline constexpr const char* add_skill = "add_skill";
inline constexpr const char* add_topic = "add_topic";
inline constexpr const char* add_package = "add_package";
inline constexpr const char* vote_edge = "vote_edge";
inline constexpr const char* submit_suggestion = "submit_suggestion";
inline constexpr const char* vote_suggestion = "vote_suggestion";
inline constexpr const char* adopt = "adopt";
inline constexpr const char* sweep = "sweep";
}  // namespace commands

/// Applies one command to `state` and returns its JSON result. Throws the
/// module error on failure, leaving `state` untouched.
nlohmann::json apply_command(State& state, const std::string& actor, const std::string& type,
                             const nlohmann::json& payload, core::Timestamp now);

/// Rebuilds state from `base` by applying `events` in order.
State replay(const std::vector<Event>& events, State base);
State replay(const std::vector<Event>& events, const crowd::ReviewConfig& review);

/// The single writer. Every successful command appends exactly one event;
/// a failing command appends nothing. A sweep that decides nothing is not
/// recorded. With a data directory, the log lives in events.log and a
/// snapshot.json is rewritten every `snapshot_every` events.
class Workspace {
 public:
  /// In-memory workspace.
  Workspace(crowd::ReviewConfig review, ingest::Clock clock);
  /// Loads snapshot.json (if any) and replays the log tail.
  Workspace(const std::filesystem::path& data_dir, crowd::ReviewConfig review, std::size_t snapshot_every,
            ingest::Clock clock);

  nlohmann::json execute(const std::string& actor, const std::string& type, nlohmann::json payload);

  /// Rejects expired suggestions at the current clock time; returns their ids.
  std::vector<std::string> sweep();

  /// Runs `fn` under a shared lock.
  template <typename Fn>
  auto read(Fn&& fn) const {
    std::shared_lock lock(mutex_);
    return fn(state_);
  }

  State state() const;
  std::vector<Event> events() const;
  /// Writes snapshot.json now. No-op for in-memory workspaces.
  void write_snapshot();
  core::Timestamp now() const { return clock_(); }
  const crowd::ReviewConfig& review() const noexcept { return review_; }

 private:
  void write_snapshot_locked();

  crowd::ReviewConfig review_;
  ingest::Clock clock_;
  std::optional<std::filesystem::path> data_dir_;
  std::size_t snapshot_every_ = 0;
  mutable std::shared_mutex mutex_;
  State state_;
  std::unique_ptr<EventLog> log_;
};

}  // namespace curricula::service
