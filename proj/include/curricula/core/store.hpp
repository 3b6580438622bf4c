#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "curricula/core/types.hpp"

namespace curricula::core {

struct ChildView {
  Id id;
  std::string title;
  int position = 0;
  int ups = 0;
  int downs = 0;
  int importance = 0;
};

/// Aggregated view of one component page.
struct PageView {
  ComponentKind kind = ComponentKind::goal;
  Id id;
  std::string title;
  std::optional<std::string> description;
  std::vector<ChildView> children;
  /// Components that list this one as a child (goals of a skill, skills of a topic, ...).
  std::vector<Id> parents;
  /// Filled by the crowd engine.
  std::vector<Id> open_suggestions;
};

struct NewResource {
  ResourceOrigin origin;
  std::string title;
  std::string description;
  FormatType format_type = FormatType::video;
  int estimated_minutes = 0;
  std::string source;
  bool has_example = false;
  bool has_theory = false;
  DetailLevel detail_level = DetailLevel::standard;
  bool is_class_recording = false;

  friend bool operator==(const NewResource&, const NewResource&) = default;
};

/// The four-tier curriculum: goals -> skills -> topics -> packages. All
/// mutations go through this class; after creation, child lists change only
/// via apply_accepted_edit. Ids are sequential per kind ("skill-3").
class CurriculumStore {
 public:
  const Goal& add_goal(const std::string& title, std::optional<std::string> description, const GoalContext& context,
                       std::span<const Id> initial_skills, const ContributorId& author, Timestamp now);

  const Skill& add_skill(const std::string& title, std::optional<std::string> description,
                         std::span<const Id> initial_topics, const ContributorId& author, Timestamp now,
                         std::optional<std::string> taxonomy_uri = std::nullopt);

  const Topic& add_topic(const std::string& title, std::optional<std::string> description,
                         const ContributorId& author, Timestamp now);

  const EducationalPackage& add_package(const std::string& title, std::optional<std::string> description,
                                        std::span<const NewResource> resources, std::span<const Id> covered_topics,
                                        const ContributorId& author, Timestamp now);

  /// Applies a crowd-accepted edit. Throws StaleEdit when the edit no longer
  /// fits the current child list, UnknownChild when the child does not exist.
  const std::vector<EdgeRef>& apply_accepted_edit(const Id& parent_id, const ChildEdit& edit, const Id& suggestion_id);

  /// Sets the voter's importance vote on an edge; returns the previous vote.
  std::optional<VoteDirection> vote_edge(const Id& parent_id, const Id& child_id, const ContributorId& voter,
                                         VoteDirection direction);

  PageView get_page(const Id& id) const;

  std::optional<ComponentKind> kind_of(const Id& id) const;
  /// Throws UnknownComponent.
  const ContributorId& definer(const Id& id) const;
  const std::string& title_of(const Id& id) const;
  /// Child edges of a goal, skill or topic. Throws UnknownParent.
  const std::vector<EdgeRef>& children(const Id& parent_id) const;
  /// Kind of component a parent of this kind holds.
  static std::optional<ComponentKind> child_kind(ComponentKind parent);

  const Goal* goal(const Id& id) const;
  const Skill* skill(const Id& id) const;
  const Topic* topic(const Id& id) const;
  const EducationalPackage* package(const Id& id) const;

  const std::map<Id, Goal>& goals() const noexcept { return goals_; }
  const std::map<Id, Skill>& skills() const noexcept { return skills_; }
  const std::map<Id, Topic>& topics() const noexcept { return topics_; }
  const std::map<Id, EducationalPackage>& packages() const noexcept { return packages_; }
  const std::vector<ChildChange>& audit() const noexcept { return audit_; }
  const std::map<std::string, long>& counters() const noexcept { return counters_; }

  /// Reassembles a store from persisted parts (snapshot load).
  static CurriculumStore restore(std::map<Id, Goal> goals, std::map<Id, Skill> skills, std::map<Id, Topic> topics,
                                 std::map<Id, EducationalPackage> packages, std::vector<ChildChange> audit,
                                 std::map<std::string, long> counters);

  friend bool operator==(const CurriculumStore&, const CurriculumStore&) = default;

 private:
  Id next_id(const std::string& prefix);
  std::vector<EdgeRef>& mutable_children(const Id& parent_id);
  std::vector<EdgeRef> make_edges(std::span<const Id> ids, ComponentKind kind) const;
  void rebuild_title_index();

  std::map<Id, Goal> goals_;
  std::map<Id, Skill> skills_;
  std::map<Id, Topic> topics_;
  std::map<Id, EducationalPackage> packages_;
  std::map<std::string, Id> skill_titles_;  // canonical title -> id
  std::map<std::string, Id> topic_titles_;
  std::vector<ChildChange> audit_;
  std::map<std::string, long> counters_;
};

}  // namespace curricula::core
