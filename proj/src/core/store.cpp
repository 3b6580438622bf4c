#include "curricula/core/store.hpp"

#include <algorithm>
#include <set>

#include "curricula/core/canonical.hpp"
#include "curricula/error.hpp"

namespace curricula::core {
namespace {

std::string require_title(const std::string& title) {
  const auto first = title.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || !has_content(title)) throw Error(ErrorCode::EmptyTitle, "title is empty");
  const auto last = title.find_last_not_of(" \t\r\n");
  return title.substr(first, last - first + 1);
}

bool valid_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos || scheme_end == 0) return false;
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") return false;
  const std::string rest = url.substr(scheme_end + 3);
  const auto host_end = rest.find_first_of("/?#");
  const std::string host = rest.substr(0, host_end);
  if (host.empty()) return false;
  return std::none_of(url.begin(), url.end(), [](char c) { return c == ' ' || c == '\t' || c == '\n'; });
}

void compact(std::vector<EdgeRef>& edges) {
  for (std::size_t i = 0; i < edges.size(); ++i) edges[i].position = static_cast<int>(i);
}

}  // namespace

Id CurriculumStore::next_id(const std::string& prefix) { return prefix + "-" + std::to_string(++counters_[prefix]); }

std::optional<ComponentKind> CurriculumStore::child_kind(ComponentKind parent) {
  switch (parent) {
    case ComponentKind::goal: return ComponentKind::skill;
    case ComponentKind::skill: return ComponentKind::topic;
    case ComponentKind::topic: return ComponentKind::package;
    case ComponentKind::package: return std::nullopt;
  }
  return std::nullopt;
}

std::vector<EdgeRef> CurriculumStore::make_edges(std::span<const Id> ids, ComponentKind kind) const {
  const bool skills = kind == ComponentKind::skill;
  std::set<Id> seen;
  std::vector<EdgeRef> edges;
  for (const auto& id : ids) {
    const bool exists = skills ? skills_.contains(id) : topics_.contains(id);
    if (!exists) throw Error(skills ? ErrorCode::UnknownSkill : ErrorCode::UnknownTopic, id);
    if (!seen.insert(id).second)
      throw Error(skills ? ErrorCode::DuplicateSkillInList : ErrorCode::DuplicateTopicInList, id);
    edges.push_back({id, static_cast<int>(edges.size()), {}});
  }
  return edges;
}

const Goal& CurriculumStore::add_goal(const std::string& title, std::optional<std::string> description,
                                      const GoalContext& context, std::span<const Id> initial_skills,
                                      const ContributorId& author, Timestamp now) {
  Goal goal;
  goal.title = require_title(title);
  goal.skills = make_edges(initial_skills, ComponentKind::skill);
  goal.id = next_id("goal");
  goal.description = std::move(description);
  goal.context = context.normalized();
  goal.created_by = author;
  goal.created_at = now;
  if (!goal.skills.empty()) audit_.push_back({goal.id, ChildChange::Cause::creation, goal.id});
  const Id id = goal.id;
  return goals_.emplace(id, std::move(goal)).first->second;
}

const Skill& CurriculumStore::add_skill(const std::string& title, std::optional<std::string> description,
                                        std::span<const Id> initial_topics, const ContributorId& author,
                                        Timestamp now, std::optional<std::string> taxonomy_uri) {
  Skill skill;
  skill.title = require_title(title);
  const std::string key = canonical_title(skill.title);
  if (skill_titles_.contains(key)) throw Error(ErrorCode::DuplicateSkillTitle, skill.title);
  skill.topics = make_edges(initial_topics, ComponentKind::topic);
  skill.id = next_id("skill");
  skill.description = std::move(description);
  skill.taxonomy_uri = std::move(taxonomy_uri);
  skill.created_by = author;
  skill.created_at = now;
  skill_titles_.emplace(key, skill.id);
  if (!skill.topics.empty()) audit_.push_back({skill.id, ChildChange::Cause::creation, skill.id});
  const Id id = skill.id;
  return skills_.emplace(id, std::move(skill)).first->second;
}

const Topic& CurriculumStore::add_topic(const std::string& title, std::optional<std::string> description,
                                        const ContributorId& author, Timestamp now) {
  Topic topic;
  topic.title = require_title(title);
  const std::string key = canonical_title(topic.title);
  if (topic_titles_.contains(key)) throw Error(ErrorCode::DuplicateTopicTitle, topic.title);
  topic.id = next_id("topic");
  topic.description = std::move(description);
  topic.created_by = author;
  topic.created_at = now;
  topic_titles_.emplace(key, topic.id);
  const Id id = topic.id;
  return topics_.emplace(id, std::move(topic)).first->second;
}

const EducationalPackage& CurriculumStore::add_package(const std::string& title,
                                                       std::optional<std::string> description,
                                                       std::span<const NewResource> resources,
                                                       std::span<const Id> covered_topics,
                                                       const ContributorId& author, Timestamp now) {
  EducationalPackage package;
  package.title = require_title(title);
  if (resources.empty()) throw Error(ErrorCode::EmptyResourceList, "a package needs at least one resource");
  for (const auto& r : resources) {
    if (r.origin.kind == ResourceOrigin::Kind::url_import && !valid_url(r.origin.url))
      throw Error(ErrorCode::InvalidResource, "invalid URL '" + r.origin.url + "'");
    if (r.origin.kind == ResourceOrigin::Kind::upload && r.origin.digest.empty())
      throw Error(ErrorCode::InvalidResource, "uploaded resource needs a content digest");
    if (r.estimated_minutes < 0) throw Error(ErrorCode::InvalidResource, "estimated_minutes must be >= 0");
  }
  std::set<Id> topics(covered_topics.begin(), covered_topics.end());
  for (const auto& t : topics)
    if (!topics_.contains(t)) throw Error(ErrorCode::UnknownTopic, t);

  package.id = next_id("package");
  package.description = std::move(description);
  package.covered_topics.assign(topics.begin(), topics.end());
  package.created_by = author;
  package.created_at = now;
  for (const auto& r : resources) {
    EducationalResource resource{next_id("resource"), r.origin,      r.title,       r.description,
                                 r.format_type,       r.estimated_minutes, r.source, r.has_example,
                                 r.has_theory,        r.detail_level, r.is_class_recording};
    package.resources.push_back(std::move(resource));
  }
  for (const auto& t : package.covered_topics) {
    auto& edges = topics_.at(t).packages;
    edges.push_back({package.id, static_cast<int>(edges.size()), {}});
    audit_.push_back({t, ChildChange::Cause::creation, package.id});
  }
  const Id id = package.id;
  return packages_.emplace(id, std::move(package)).first->second;
}

std::vector<EdgeRef>& CurriculumStore::mutable_children(const Id& parent_id) {
  if (auto it = goals_.find(parent_id); it != goals_.end()) return it->second.skills;
  if (auto it = skills_.find(parent_id); it != skills_.end()) return it->second.topics;
  if (auto it = topics_.find(parent_id); it != topics_.end()) return it->second.packages;
  throw Error(ErrorCode::UnknownParent, parent_id);
}

const std::vector<EdgeRef>& CurriculumStore::children(const Id& parent_id) const {
  return const_cast<CurriculumStore*>(this)->mutable_children(parent_id);
}

const std::vector<EdgeRef>& CurriculumStore::apply_accepted_edit(const Id& parent_id, const ChildEdit& edit,
                                                                 const Id& suggestion_id) {
  auto& edges = mutable_children(parent_id);
  const ComponentKind wanted = *child_kind(*kind_of(parent_id));
  auto position_of = [&](const Id& child) {
    return std::find_if(edges.begin(), edges.end(), [&](const EdgeRef& e) { return e.child_id == child; });
  };

  if (const auto* add = std::get_if<AddChild>(&edit)) {
    if (kind_of(add->child_id) != wanted) throw Error(ErrorCode::UnknownChild, add->child_id);
    if (position_of(add->child_id) != edges.end())
      throw Error(ErrorCode::StaleEdit, add->child_id + " is already a child of " + parent_id);
    edges.push_back({add->child_id, static_cast<int>(edges.size()), {}});
  } else if (const auto* del = std::get_if<DeleteChild>(&edit)) {
    if (!kind_of(del->child_id)) throw Error(ErrorCode::UnknownChild, del->child_id);
    auto it = position_of(del->child_id);
    if (it == edges.end()) throw Error(ErrorCode::StaleEdit, del->child_id + " is not a child of " + parent_id);
    edges.erase(it);
    compact(edges);
  } else {
    const auto& order = std::get<ReorderChildren>(edit).order;
    std::vector<Id> current;
    for (const auto& e : edges) current.push_back(e.child_id);
    std::vector<Id> proposed = order;
    std::sort(current.begin(), current.end());
    std::sort(proposed.begin(), proposed.end());
    if (current != proposed) throw Error(ErrorCode::StaleEdit, "permutation does not match the children of " + parent_id);
    std::vector<EdgeRef> reordered;
    for (const auto& id : order) reordered.push_back(*position_of(id));
    edges = std::move(reordered);
    compact(edges);
  }
  audit_.push_back({parent_id, ChildChange::Cause::suggestion, suggestion_id});
  return edges;
}

std::optional<VoteDirection> CurriculumStore::vote_edge(const Id& parent_id, const Id& child_id,
                                                        const ContributorId& voter, VoteDirection direction) {
  std::vector<EdgeRef>* edges = nullptr;
  try {
    edges = &mutable_children(parent_id);
  } catch (const Error&) {
    throw Error(ErrorCode::UnknownEdge, parent_id + " -> " + child_id);
  }
  auto it = std::find_if(edges->begin(), edges->end(), [&](const EdgeRef& e) { return e.child_id == child_id; });
  if (it == edges->end()) throw Error(ErrorCode::UnknownEdge, parent_id + " -> " + child_id);
  return it->tally.cast(voter, direction);
}

std::optional<ComponentKind> CurriculumStore::kind_of(const Id& id) const {
  if (goals_.contains(id)) return ComponentKind::goal;
  if (skills_.contains(id)) return ComponentKind::skill;
  if (topics_.contains(id)) return ComponentKind::topic;
  if (packages_.contains(id)) return ComponentKind::package;
  return std::nullopt;
}

const ContributorId& CurriculumStore::definer(const Id& id) const {
  if (auto g = goal(id)) return g->created_by;
  if (auto s = skill(id)) return s->created_by;
  if (auto t = topic(id)) return t->created_by;
  if (auto p = package(id)) return p->created_by;
  throw Error(ErrorCode::UnknownComponent, id);
}

const std::string& CurriculumStore::title_of(const Id& id) const {
  if (auto g = goal(id)) return g->title;
  if (auto s = skill(id)) return s->title;
  if (auto t = topic(id)) return t->title;
  if (auto p = package(id)) return p->title;
  throw Error(ErrorCode::UnknownComponent, id);
}

const Goal* CurriculumStore::goal(const Id& id) const {
  auto it = goals_.find(id);
  return it == goals_.end() ? nullptr : &it->second;
}
const Skill* CurriculumStore::skill(const Id& id) const {
  auto it = skills_.find(id);
  return it == skills_.end() ? nullptr : &it->second;
}
const Topic* CurriculumStore::topic(const Id& id) const {
  auto it = topics_.find(id);
  return it == topics_.end() ? nullptr : &it->second;
}
const EducationalPackage* CurriculumStore::package(const Id& id) const {
  auto it = packages_.find(id);
  return it == packages_.end() ? nullptr : &it->second;
}

PageView CurriculumStore::get_page(const Id& id) const {
  const auto kind = kind_of(id);
  if (!kind) throw Error(ErrorCode::UnknownComponent, id);

  PageView page;
  page.kind = *kind;
  page.id = id;
  page.title = title_of(id);
  auto contains = [&](const std::vector<EdgeRef>& edges) {
    return std::any_of(edges.begin(), edges.end(), [&](const EdgeRef& e) { return e.child_id == id; });
  };
  switch (*kind) {
    case ComponentKind::goal:
      page.description = goals_.at(id).description;
      break;
    case ComponentKind::skill:
      page.description = skills_.at(id).description;
      for (const auto& [gid, g] : goals_)
        if (contains(g.skills)) page.parents.push_back(gid);
      break;
    case ComponentKind::topic:
      page.description = topics_.at(id).description;
      for (const auto& [sid, s] : skills_)
        if (contains(s.topics)) page.parents.push_back(sid);
      break;
    case ComponentKind::package:
      page.description = packages_.at(id).description;
      for (const auto& [tid, t] : topics_)
        if (contains(t.packages)) page.parents.push_back(tid);
      return page;
  }
  for (const auto& edge : children(id))
    page.children.push_back({edge.child_id, title_of(edge.child_id), edge.position, edge.tally.ups,
                             edge.tally.downs, edge.tally.importance()});
  return page;
}

void CurriculumStore::rebuild_title_index() {
  skill_titles_.clear();
  topic_titles_.clear();
  for (const auto& [id, s] : skills_) skill_titles_.emplace(canonical_title(s.title), id);
  for (const auto& [id, t] : topics_) topic_titles_.emplace(canonical_title(t.title), id);
}

CurriculumStore CurriculumStore::restore(std::map<Id, Goal> goals, std::map<Id, Skill> skills,
                                         std::map<Id, Topic> topics, std::map<Id, EducationalPackage> packages,
                                         std::vector<ChildChange> audit, std::map<std::string, long> counters) {
  CurriculumStore store;
  store.goals_ = std::move(goals);
  store.skills_ = std::move(skills);
  store.topics_ = std::move(topics);
  store.packages_ = std::move(packages);
  store.audit_ = std::move(audit);
  store.counters_ = std::move(counters);
  store.rebuild_title_index();
  return store;
}

}  // namespace curricula::core
