#include "curricula/service/serialize.hpp"

#include <cstdio>

#include "curricula/error.hpp"

namespace curricula::service {

std::string format_time(core::Timestamp t) {
  using namespace std::chrono;
  const auto day = floor<days>(t);
  const year_month_day ymd{day};
  const hh_mm_ss hms{t - day};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02ldZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                static_cast<long>(hms.seconds().count()));
  return buf;
}

core::Timestamp parse_time(const std::string& text) {
  using namespace std::chrono;
  int y = 0;
  unsigned mo = 0, d = 0, h = 0, mi = 0, s = 0;
  char z = 0;
  int consumed = 0;
  if (std::sscanf(text.c_str(), "%4d-%2u-%2uT%2u:%2u:%2u%c%n", &y, &mo, &d, &h, &mi, &s, &z, &consumed) != 7 ||
      z != 'Z' || static_cast<std::size_t>(consumed) != text.size())
    throw Error(ErrorCode::BadRequest, "bad timestamp '" + text + "'");
  const year_month_day ymd{year{y}, month{mo}, day{d}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 59) throw Error(ErrorCode::BadRequest, "bad timestamp '" + text + "'");
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

}  // namespace curricula::service

namespace curricula::core {

using service::format_time;
using service::parse_time;

namespace {

VoteDirection direction_of(const std::string& s) {
  auto d = parse_direction(s);
  if (!d) throw Error(ErrorCode::BadRequest, "direction must be up or down, got '" + s + "'");
  return *d;
}

std::optional<std::string> optional_string(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<std::string>();
}

nlohmann::json optional_json(const std::optional<std::string>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

void to_json(nlohmann::json& j, const GoalContext& v) {
  j = {{"industry", v.industry}, {"company", v.company}, {"city", v.city}, {"country", v.country}};
}

void from_json(const nlohmann::json& j, GoalContext& v) {
  v = GoalContext{};
  v.industry = j.value("industry", std::string(kGeneral));
  v.company = j.value("company", std::string(kGeneral));
  v.city = j.value("city", std::string(kGeneral));
  v.country = j.value("country", std::string(kGeneral));
}

void to_json(nlohmann::json& j, const VoteTally& v) {
  nlohmann::json voters = nlohmann::json::object();
  for (const auto& [who, dir] : v.voters) voters[who] = std::string(to_string(dir));
  j = {{"ups", v.ups}, {"downs", v.downs}, {"voters", voters}};
}

void from_json(const nlohmann::json& j, VoteTally& v) {
  v.ups = j.at("ups").get<int>();
  v.downs = j.at("downs").get<int>();
  v.voters.clear();
  for (const auto& [who, dir] : j.at("voters").items()) v.voters[who] = direction_of(dir.get<std::string>());
}

void to_json(nlohmann::json& j, const EdgeRef& v) {
  j = {{"child_id", v.child_id}, {"position", v.position}, {"tally", v.tally}};
}

void from_json(const nlohmann::json& j, EdgeRef& v) {
  v.child_id = j.at("child_id").get<std::string>();
  v.position = j.at("position").get<int>();
  v.tally = j.at("tally").get<VoteTally>();
}

void to_json(nlohmann::json& j, const Goal& v) {
  j = {{"id", v.id},           {"title", v.title},           {"description", optional_json(v.description)},
       {"context", v.context}, {"skills", v.skills},         {"created_by", v.created_by},
       {"created_at", format_time(v.created_at)}};
}

void from_json(const nlohmann::json& j, Goal& v) {
  v.id = j.at("id").get<std::string>();
  v.title = j.at("title").get<std::string>();
  v.description = optional_string(j, "description");
  v.context = j.at("context").get<GoalContext>();
  v.skills = j.at("skills").get<std::vector<EdgeRef>>();
  v.created_by = j.at("created_by").get<std::string>();
  v.created_at = parse_time(j.at("created_at").get<std::string>());
}

void to_json(nlohmann::json& j, const Skill& v) {
  j = {{"id", v.id},
       {"title", v.title},
       {"description", optional_json(v.description)},
       {"taxonomy_uri", optional_json(v.taxonomy_uri)},
       {"topics", v.topics},
       {"created_by", v.created_by},
       {"created_at", format_time(v.created_at)}};
}

void from_json(const nlohmann::json& j, Skill& v) {
  v.id = j.at("id").get<std::string>();
  v.title = j.at("title").get<std::string>();
  v.description = optional_string(j, "description");
  v.taxonomy_uri = optional_string(j, "taxonomy_uri");
  v.topics = j.at("topics").get<std::vector<EdgeRef>>();
  v.created_by = j.at("created_by").get<std::string>();
  v.created_at = parse_time(j.at("created_at").get<std::string>());
}

void to_json(nlohmann::json& j, const Topic& v) {
  j = {{"id", v.id},
       {"title", v.title},
       {"description", optional_json(v.description)},
       {"packages", v.packages},
       {"created_by", v.created_by},
       {"created_at", format_time(v.created_at)}};
}

void from_json(const nlohmann::json& j, Topic& v) {
  v.id = j.at("id").get<std::string>();
  v.title = j.at("title").get<std::string>();
  v.description = optional_string(j, "description");
  v.packages = j.at("packages").get<std::vector<EdgeRef>>();
  v.created_by = j.at("created_by").get<std::string>();
  v.created_at = parse_time(j.at("created_at").get<std::string>());
}

void to_json(nlohmann::json& j, const ResourceOrigin& v) {
  if (v.kind == ResourceOrigin::Kind::url_import)
    j = {{"kind", "url_import"}, {"url", v.url}};
  else
    j = {{"kind", "upload"}, {"digest", v.digest}};
}

void from_json(const nlohmann::json& j, ResourceOrigin& v) {
  const auto kind = j.at("kind").get<std::string>();
  v = ResourceOrigin{};
  if (kind == "url_import") {
    v.kind = ResourceOrigin::Kind::url_import;
    v.url = j.value("url", std::string());
  } else if (kind == "upload") {
    v.kind = ResourceOrigin::Kind::upload;
    v.digest = j.value("digest", std::string());
  } else {
    throw Error(ErrorCode::BadRequest, "origin kind must be url_import or upload, got '" + kind + "'");
  }
}

namespace {

template <typename R>
void resource_fields_to_json(nlohmann::json& j, const R& v) {
  j["origin"] = v.origin;
  j["title"] = v.title;
  j["description"] = v.description;
  j["format_type"] = std::string(to_string(v.format_type));
  j["estimated_minutes"] = v.estimated_minutes;
  j["source"] = v.source;
  j["has_example"] = v.has_example;
  j["has_theory"] = v.has_theory;
  j["detail_level"] = std::string(to_string(v.detail_level));
  j["is_class_recording"] = v.is_class_recording;
}

template <typename R>
void resource_fields_from_json(const nlohmann::json& j, R& v) {
  v.origin = j.at("origin").get<ResourceOrigin>();
  v.title = j.at("title").get<std::string>();
  v.description = j.value("description", std::string());
  const auto format = j.value("format_type", std::string("video"));
  const auto parsed_format = parse_format(format);
  if (!parsed_format) throw Error(ErrorCode::BadRequest, "unknown format_type '" + format + "'");
  v.format_type = *parsed_format;
  v.estimated_minutes = j.value("estimated_minutes", 0);
  v.source = j.value("source", std::string());
  v.has_example = j.value("has_example", false);
  v.has_theory = j.value("has_theory", false);
  const auto detail = j.value("detail_level", std::string("standard"));
  const auto parsed_detail = parse_detail(detail);
  if (!parsed_detail) throw Error(ErrorCode::BadRequest, "unknown detail_level '" + detail + "'");
  v.detail_level = *parsed_detail;
  v.is_class_recording = j.value("is_class_recording", false);
}

}  // namespace

void to_json(nlohmann::json& j, const EducationalResource& v) {
  j = nlohmann::json::object();
  j["id"] = v.id;
  resource_fields_to_json(j, v);
}

void from_json(const nlohmann::json& j, EducationalResource& v) {
  v.id = j.at("id").get<std::string>();
  resource_fields_from_json(j, v);
}

void to_json(nlohmann::json& j, const NewResource& v) {
  j = nlohmann::json::object();
  resource_fields_to_json(j, v);
}

void from_json(const nlohmann::json& j, NewResource& v) { resource_fields_from_json(j, v); }

void to_json(nlohmann::json& j, const EducationalPackage& v) {
  j = {{"id", v.id},
       {"title", v.title},
       {"description", optional_json(v.description)},
       {"resources", v.resources},
       {"covered_topics", v.covered_topics},
       {"created_by", v.created_by},
       {"created_at", format_time(v.created_at)}};
}

void from_json(const nlohmann::json& j, EducationalPackage& v) {
  v.id = j.at("id").get<std::string>();
  v.title = j.at("title").get<std::string>();
  v.description = optional_string(j, "description");
  v.resources = j.at("resources").get<std::vector<EducationalResource>>();
  v.covered_topics = j.at("covered_topics").get<std::vector<Id>>();
  v.created_by = j.at("created_by").get<std::string>();
  v.created_at = parse_time(j.at("created_at").get<std::string>());
}

void to_json(nlohmann::json& j, const ChildChange& v) {
  j = {{"parent_id", v.parent_id},
       {"cause", v.cause == ChildChange::Cause::creation ? "creation" : "suggestion"},
       {"cause_id", v.cause_id}};
}

void from_json(const nlohmann::json& j, ChildChange& v) {
  v.parent_id = j.at("parent_id").get<std::string>();
  v.cause = j.at("cause").get<std::string>() == "creation" ? ChildChange::Cause::creation
                                                            : ChildChange::Cause::suggestion;
  v.cause_id = j.at("cause_id").get<std::string>();
}

void to_json(nlohmann::json& j, const ChildView& v) {
  j = {{"id", v.id},   {"title", v.title}, {"position", v.position},
       {"ups", v.ups}, {"downs", v.downs}, {"importance", v.importance}};
}

void to_json(nlohmann::json& j, const PageView& v) {
  j = {{"kind", std::string(to_string(v.kind))},
       {"id", v.id},
       {"title", v.title},
       {"description", optional_json(v.description)},
       {"children", v.children},
       {"parents", v.parents},
       {"open_suggestions", v.open_suggestions}};
}

nlohmann::json edit_to_json(const ChildEdit& edit) {
  if (const auto* add = std::get_if<AddChild>(&edit)) return {{"kind", "add"}, {"child_id", add->child_id}};
  if (const auto* del = std::get_if<DeleteChild>(&edit)) return {{"kind", "delete"}, {"child_id", del->child_id}};
  return {{"kind", "reorder"}, {"order", std::get<ReorderChildren>(edit).order}};
}

ChildEdit edit_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw Error(ErrorCode::BadRequest, "edit needs a string 'kind'");
  const auto kind = j["kind"].get<std::string>();
  auto child = [&] {
    if (!j.contains("child_id") || !j["child_id"].is_string())
      throw Error(ErrorCode::BadRequest, kind + " edit needs a string 'child_id'");
    return j["child_id"].get<std::string>();
  };
  if (kind == "add") return AddChild{child()};
  if (kind == "delete") return DeleteChild{child()};
  if (kind == "reorder") {
    if (!j.contains("order") || !j["order"].is_array())
      throw Error(ErrorCode::BadRequest, "reorder edit needs an 'order' array");
    return ReorderChildren{j["order"].get<std::vector<std::string>>()};
  }
  throw Error(ErrorCode::BadRequest, "edit kind must be add, delete or reorder, got '" + kind + "'");
}

namespace {

template <typename T>
nlohmann::json values_of(const std::map<Id, T>& m) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [_, v] : m) out.push_back(v);
  return out;
}

template <typename T>
std::map<Id, T> keyed(const nlohmann::json& arr) {
  std::map<Id, T> out;
  for (const auto& e : arr) {
    auto v = e.get<T>();
    out.emplace(v.id, std::move(v));
  }
  return out;
}

}  // namespace

nlohmann::json store_to_json(const CurriculumStore& store) {
  return {{"goals", values_of(store.goals())},       {"skills", values_of(store.skills())},
          {"topics", values_of(store.topics())},     {"packages", values_of(store.packages())},
          {"audit", store.audit()},                  {"counters", store.counters()}};
}

CurriculumStore store_from_json(const nlohmann::json& j) {
  return CurriculumStore::restore(keyed<Goal>(j.at("goals")), keyed<Skill>(j.at("skills")),
                                  keyed<Topic>(j.at("topics")), keyed<EducationalPackage>(j.at("packages")),
                                  j.at("audit").get<std::vector<ChildChange>>(),
                                  j.at("counters").get<std::map<std::string, long>>());
}

}  // namespace curricula::core

namespace curricula::crowd {

using service::format_time;
using service::parse_time;

namespace {

PointCause cause_of(const std::string& s) {
  for (auto c : {PointCause::importance_upvote, PointCause::importance_revoked, PointCause::adoption,
                 PointCause::material, PointCause::spent})
    if (to_string(c) == s) return c;
  throw Error(ErrorCode::BadRequest, "unknown point cause '" + s + "'");
}

SuggestionStatus status_of(const std::string& s) {
  for (auto v : {SuggestionStatus::open, SuggestionStatus::accepted, SuggestionStatus::rejected})
    if (to_string(v) == s) return v;
  throw Error(ErrorCode::BadRequest, "unknown status '" + s + "'");
}

RejectReason reason_of(const std::string& s) {
  for (auto v : {RejectReason::ratio, RejectReason::expired, RejectReason::stale})
    if (to_string(v) == s) return v;
  throw Error(ErrorCode::BadRequest, "unknown reason '" + s + "'");
}

using PairSet = std::set<std::pair<ContributorId, Id>>;

nlohmann::json pairs_to_json(const PairSet& s) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [a, b] : s) out.push_back({a, b});
  return out;
}

PairSet pairs_from_json(const nlohmann::json& j) {
  PairSet out;
  for (const auto& e : j) out.emplace(e.at(0).get<std::string>(), e.at(1).get<std::string>());
  return out;
}

}  // namespace

void to_json(nlohmann::json& j, const SuggestionVote& v) {
  j = {{"voter", v.voter},
       {"direction", std::string(core::to_string(v.direction))},
       {"spent_points", v.spent_points},
       {"weight", v.weight()}};
}

void from_json(const nlohmann::json& j, SuggestionVote& v) {
  v.voter = j.at("voter").get<std::string>();
  const auto d = core::parse_direction(j.at("direction").get<std::string>());
  if (!d) throw Error(ErrorCode::BadRequest, "bad vote direction");
  v.direction = *d;
  v.spent_points = j.at("spent_points").get<long>();
}

void to_json(nlohmann::json& j, const Suggestion& v) {
  j = {{"id", v.id},
       {"parent_id", v.parent_id},
       {"edit", core::edit_to_json(v.edit)},
       {"submitted_by", v.submitted_by},
       {"submitted_at", format_time(v.submitted_at)},
       {"deadline", format_time(v.deadline)},
       {"votes", v.votes},
       {"status", std::string(to_string(v.status))},
       {"reason", v.reason ? nlohmann::json(std::string(to_string(*v.reason))) : nlohmann::json(nullptr)},
       {"decided_at", v.decided_at ? nlohmann::json(format_time(*v.decided_at)) : nlohmann::json(nullptr)},
       {"up_weight", v.up_weight()},
       {"total_weight", v.total_weight()}};
}

void from_json(const nlohmann::json& j, Suggestion& v) {
  v.id = j.at("id").get<std::string>();
  v.parent_id = j.at("parent_id").get<std::string>();
  v.edit = core::edit_from_json(j.at("edit"));
  v.submitted_by = j.at("submitted_by").get<std::string>();
  v.submitted_at = parse_time(j.at("submitted_at").get<std::string>());
  v.deadline = parse_time(j.at("deadline").get<std::string>());
  v.votes = j.at("votes").get<std::vector<SuggestionVote>>();
  v.status = status_of(j.at("status").get<std::string>());
  v.reason = j.at("reason").is_null() ? std::nullopt : std::optional(reason_of(j["reason"].get<std::string>()));
  v.decided_at = j.at("decided_at").is_null() ? std::nullopt
                                                : std::optional(parse_time(j["decided_at"].get<std::string>()));
}

void to_json(nlohmann::json& j, const PointChange& v) {
  j = {{"contributor", v.contributor},
       {"context", v.context},
       {"delta", v.delta},
       {"cause", std::string(to_string(v.cause))},
       {"cause_id", v.cause_id}};
}

void from_json(const nlohmann::json& j, PointChange& v) {
  v.contributor = j.at("contributor").get<std::string>();
  v.context = j.at("context").get<std::string>();
  v.delta = j.at("delta").get<long>();
  v.cause = cause_of(j.at("cause").get<std::string>());
  v.cause_id = j.at("cause_id").get<std::string>();
}

nlohmann::json crowd_to_json(const CrowdEngine& engine) {
  nlohmann::json balances = nlohmann::json::array();
  for (const auto& [key, value] : engine.ledger().balances())
    balances.push_back({{"contributor", key.first}, {"context", key.second}, {"balance", value}});
  nlohmann::json suggestions = nlohmann::json::array();
  for (const auto& [_, s] : engine.suggestions()) suggestions.push_back(s);
  return {{"balances", balances},
          {"history", engine.ledger().history()},
          {"suggestions", suggestions},
          {"adoptions", pairs_to_json(engine.adoptions())},
          {"material_votes", pairs_to_json(engine.material_votes())},
          {"suggestion_counter", engine.suggestion_counter()}};
}

CrowdEngine crowd_from_json(const nlohmann::json& j, const ReviewConfig& config) {
  std::map<std::pair<ContributorId, Id>, long> balances;
  for (const auto& b : j.at("balances"))
    balances[{b.at("contributor").get<std::string>(), b.at("context").get<std::string>()}] =
        b.at("balance").get<long>();
  std::map<Id, Suggestion> suggestions;
  for (const auto& e : j.at("suggestions")) {
    auto s = e.get<Suggestion>();
    suggestions.emplace(s.id, std::move(s));
  }
  return CrowdEngine::restore(config,
                              PointLedger::restore(std::move(balances),
                                                   j.at("history").get<std::vector<PointChange>>()),
                              std::move(suggestions), pairs_from_json(j.at("adoptions")),
                              pairs_from_json(j.at("material_votes")), j.at("suggestion_counter").get<long>());
}

}  // namespace curricula::crowd

namespace curricula::recommender {

void to_json(nlohmann::json& j, const TopicCandidate& v) {
  j = {{"term", v.term}, {"probability", v.probability}, {"source", std::string(to_string(v.source))}};
}

void to_json(nlohmann::json& j, const ResourceRecommendation& v) {
  j = {{"record", ingest::record_to_json(v.record)},
       {"quality_score", v.quality_score},
       {"relevance_score", v.relevance_score},
       {"is_top", v.is_top},
       {"passed", v.passed}};
}

void to_json(nlohmann::json& j, const LabelScore& v) { j = {{"label", v.label}, {"posterior", v.posterior}}; }

}  // namespace curricula::recommender

namespace curricula::esco {

void to_json(nlohmann::json& j, const SkillRecommendations& v) {
  nlohmann::json skills = nlohmann::json::array();
  for (const auto& s : v.skills)
    skills.push_back({{"skill_uri", s.skill_uri},
                      {"label", s.label},
                      {"relation", s.relation == Relation::essential ? "essential" : "optional"}});
  j = {{"match",
        {{"occupation_uri", v.match.occupation_uri},
         {"matched_label", v.match.matched_label},
         {"bleu", v.match.bleu}}},
       {"skills", skills}};
}

}  // namespace curricula::esco
