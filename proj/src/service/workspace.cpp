#include "curricula/service/workspace.hpp"

#include <fstream>
#include <mutex>
#include <sstream>

#include "curricula/error.hpp"
#include "curricula/service/serialize.hpp"

namespace curricula::service {

using nlohmann::json;

nlohmann::json state_to_json(const State& state) {
  return {{"store", core::store_to_json(state.store)}, {"crowd", crowd::crowd_to_json(state.crowd)}};
}

State state_from_json(const nlohmann::json& j, const crowd::ReviewConfig& review) {
  return State{core::store_from_json(j.at("store")), crowd::crowd_from_json(j.at("crowd"), review)};
}

namespace {

const json& field(const json& payload, const char* key) {
  auto it = payload.find(key);
  if (it == payload.end() || it->is_null()) throw Error(ErrorCode::BadRequest, std::string("missing '") + key + "'");
  return *it;
}

std::string text(const json& payload, const char* key) {
  const json& v = field(payload, key);
  if (!v.is_string()) throw Error(ErrorCode::BadRequest, std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

std::optional<std::string> optional_text(const json& payload, const char* key) {
  auto it = payload.find(key);
  if (it == payload.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw Error(ErrorCode::BadRequest, std::string("'") + key + "' must be a string");
  return it->get<std::string>();
}

std::vector<std::string> ids(const json& payload, const char* key) {
  auto it = payload.find(key);
  if (it == payload.end() || it->is_null()) return {};
  if (!it->is_array()) throw Error(ErrorCode::BadRequest, std::string("'") + key + "' must be an array of ids");
  std::vector<std::string> out;
  for (const auto& v : *it) {
    if (!v.is_string()) throw Error(ErrorCode::BadRequest, std::string("'") + key + "' must be an array of ids");
    out.push_back(v.get<std::string>());
  }
  return out;
}

core::VoteDirection direction(const json& payload) {
  const auto d = core::parse_direction(text(payload, "direction"));
  if (!d) throw Error(ErrorCode::BadRequest, "direction must be up or down");
  return *d;
}

template <typename T>
T parse_as(const json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadRequest, std::string(what) + ": " + e.what());
  }
}

json tally_json(const core::VoteTally& t) {
  return {{"ups", t.ups}, {"downs", t.downs}, {"importance", t.importance()}};
}

}  // namespace

nlohmann::json apply_command(State& state, const std::string& actor, const std::string& type, const json& payload,
                             core::Timestamp now) {
  if (!payload.is_object()) throw Error(ErrorCode::BadRequest, "payload must be a JSON object");
  auto& store = state.store;
  auto& crowd = state.crowd;

  if (type == commands::add_goal) {
    core::GoalContext context;
    if (auto it = payload.find("context"); it != payload.end() && !it->is_null()) {
      if (!it->is_object()) throw Error(ErrorCode::BadRequest, "'context' must be an object");
      context = parse_as<core::GoalContext>(*it, "context");
    }
    const auto skills = ids(payload, "skills");
    return store.add_goal(text(payload, "title"), optional_text(payload, "description"), context, skills, actor, now);
  }
  if (type == commands::add_skill) {
    const auto topics = ids(payload, "topics");
    return store.add_skill(text(payload, "title"), optional_text(payload, "description"), topics, actor, now,
                           optional_text(payload, "taxonomy_uri"));
  }
  if (type == commands::add_topic) {
    return store.add_topic(text(payload, "title"), optional_text(payload, "description"), actor, now);
  }
  if (type == commands::add_package) {
    const json& list = field(payload, "resources");
    if (!list.is_array()) throw Error(ErrorCode::BadRequest, "'resources' must be an array");
    std::vector<core::NewResource> resources;
    for (const auto& r : list) {
      if (!r.is_object()) throw Error(ErrorCode::BadRequest, "each resource must be an object");
      resources.push_back(parse_as<core::NewResource>(r, "resource"));
    }
    const auto topics = ids(payload, "topics");
    return store.add_package(text(payload, "title"), optional_text(payload, "description"), resources, topics, actor,
                             now);
  }
  if (type == commands::vote_edge) {
    const auto parent = text(payload, "parent_id");
    const auto child = text(payload, "child_id");
    const auto tally = crowd.vote_importance(store, actor, parent, child, direction(payload));
    return {{"parent_id", parent}, {"child_id", child}, {"tally", tally_json(tally)}};
  }
  if (type == commands::submit_suggestion) {
    const auto edit = core::edit_from_json(field(payload, "edit"));
    return crowd.submit_suggestion(store, actor, text(payload, "parent_id"), edit, now);
  }
  if (type == commands::vote_suggestion) {
    long spend = 0;
    if (auto it = payload.find("spend_points"); it != payload.end() && !it->is_null()) {
      if (!it->is_number_integer()) throw Error(ErrorCode::BadRequest, "'spend_points' must be an integer");
      spend = it->get<long>();
    }
    return crowd.vote_suggestion(store, actor, text(payload, "suggestion_id"), direction(payload), spend, now);
  }
  if (type == commands::adopt) {
    const auto changes = crowd.award_adoption_point(store, actor, text(payload, "component_id"));
    return {{"learner", actor}, {"component_id", payload["component_id"]}, {"changes", changes}};
  }
  if (type == commands::sweep) {
    return {{"rejected", crowd.sweep_expired(now)}};
  }
  throw Error(ErrorCode::BadRequest, "unknown command '" + type + "'");
}

State replay(const std::vector<Event>& events, State base) {
  for (const auto& e : events) {
    try {
      apply_command(base, e.actor, e.type, e.payload, e.timestamp);
    } catch (const Error& err) {
      throw Error(ErrorCode::CorruptLog, "seq " + std::to_string(e.seq) + " does not replay: " + err.what());
    }
  }
  return base;
}

State replay(const std::vector<Event>& events, const crowd::ReviewConfig& review) {
  return replay(events, State{core::CurriculumStore{}, crowd::CrowdEngine(review)});
}

Workspace::Workspace(crowd::ReviewConfig review, ingest::Clock clock)
    : review_(review),
      clock_(std::move(clock)),
      state_{core::CurriculumStore{}, crowd::CrowdEngine(review)},
      log_(std::make_unique<EventLog>()) {}

Workspace::Workspace(const std::filesystem::path& data_dir, crowd::ReviewConfig review, std::size_t snapshot_every,
                     ingest::Clock clock)
    : review_(review),
      clock_(std::move(clock)),
      data_dir_(data_dir),
      snapshot_every_(snapshot_every),
      state_{core::CurriculumStore{}, crowd::CrowdEngine(review)} {
  std::filesystem::create_directories(data_dir);
  log_ = std::make_unique<EventLog>(data_dir / "events.log");
  long snapshot_seq = 0;
  const auto snapshot_path = data_dir / "snapshot.json";
  if (std::filesystem::exists(snapshot_path)) {
    std::ifstream in(snapshot_path, std::ios::binary);
    try {
      const json doc = json::parse(in);
      snapshot_seq = doc.at("seq").get<long>();
      state_ = state_from_json(doc.at("state"), review_);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::CorruptLog, "snapshot: " + std::string(e.what()));
    } catch (const Error& e) {
      throw Error(ErrorCode::CorruptLog, "snapshot: " + std::string(e.what()));
    }
    if (snapshot_seq > log_->last_seq())
      throw Error(ErrorCode::CorruptLog, "seq " + std::to_string(log_->last_seq() + 1) +
                                             ": log ends before snapshot seq " + std::to_string(snapshot_seq));
  }
  const auto& all = log_->events();
  const std::vector<Event> tail(all.begin() + snapshot_seq, all.end());
  state_ = replay(tail, std::move(state_));
}

nlohmann::json Workspace::execute(const std::string& actor, const std::string& type, nlohmann::json payload) {
  std::unique_lock lock(mutex_);
  const auto now = clock_();
  json result = apply_command(state_, actor, type, payload, now);
  if (type == commands::sweep && result["rejected"].empty()) return result;
  const Event& e = log_->append(now, actor, type, std::move(payload));
  if (data_dir_ && snapshot_every_ > 0 && e.seq % static_cast<long>(snapshot_every_) == 0) write_snapshot_locked();
  return result;
}

std::vector<std::string> Workspace::sweep() {
  return execute("system", commands::sweep, json::object())["rejected"].get<std::vector<std::string>>();
}

State Workspace::state() const {
  std::shared_lock lock(mutex_);
  return state_;
}

std::vector<Event> Workspace::events() const {
  std::shared_lock lock(mutex_);
  return log_->events();
}

void Workspace::write_snapshot() {
  std::unique_lock lock(mutex_);
  write_snapshot_locked();
}

void Workspace::write_snapshot_locked() {
  if (!data_dir_) return;
  const json doc = {{"seq", log_->last_seq()}, {"state", state_to_json(state_)}};
  const auto tmp = *data_dir_ / "snapshot.json.tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << doc.dump(1) << '\n';
    if (!out) throw Error(ErrorCode::CorruptLog, "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, *data_dir_ / "snapshot.json");
}

}  // namespace curricula::service
