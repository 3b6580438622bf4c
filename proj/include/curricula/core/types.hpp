#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace curricula::core {

using Id = std::string;
using ContributorId = std::string;
using Timestamp = std::chrono::sys_seconds;

enum class ComponentKind { goal, skill, topic, package };

enum class VoteDirection { up, down };

inline constexpr const char* kGeneral = "General";

struct GoalContext {
  std::string industry = kGeneral;
  std::string company = kGeneral;
  std::string city = kGeneral;
  std::string country = kGeneral;

  /// Trims every field; blank fields become the General sentinel.
  GoalContext normalized() const;

  friend bool operator==(const GoalContext&, const GoalContext&) = default;
};

/// Importance votes on one parent->child edge, one entry per contributor.
struct VoteTally {
  int ups = 0;
  int downs = 0;
  std::map<ContributorId, VoteDirection> voters;

  /// Sets or overwrites the voter's direction; returns the previous one.
  std::optional<VoteDirection> cast(const ContributorId& voter, VoteDirection direction);
  int importance() const noexcept { return ups - downs; }

  friend bool operator==(const VoteTally&, const VoteTally&) = default;
};

struct EdgeRef {
  Id child_id;
  int position = 0;
  VoteTally tally;

  friend bool operator==(const EdgeRef&, const EdgeRef&) = default;
};

struct Goal {
  Id id;
  std::string title;
  std::optional<std::string> description;
  GoalContext context;
  std::vector<EdgeRef> skills;
  ContributorId created_by;
  Timestamp created_at{};

  friend bool operator==(const Goal&, const Goal&) = default;
};

struct Skill {
  Id id;
  std::string title;
  std::optional<std::string> description;
  std::optional<std::string> taxonomy_uri;
  std::vector<EdgeRef> topics;
  ContributorId created_by;
  Timestamp created_at{};

  friend bool operator==(const Skill&, const Skill&) = default;
};

struct Topic {
  Id id;
  std::string title;
  std::optional<std::string> description;
  std::vector<EdgeRef> packages;
  ContributorId created_by;
  Timestamp created_at{};

  friend bool operator==(const Topic&, const Topic&) = default;
};

enum class FormatType { video, text, audio, mixed };
enum class DetailLevel { overview, standard, deep };

struct ResourceOrigin {
  enum class Kind { url_import, upload };
  Kind kind = Kind::url_import;
  std::string url;     // url_import
  std::string digest;  // upload: content digest

  friend bool operator==(const ResourceOrigin&, const ResourceOrigin&) = default;
};

struct EducationalResource {
  Id id;
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

  friend bool operator==(const EducationalResource&, const EducationalResource&) = default;
};

struct EducationalPackage {
  Id id;
  std::string title;
  std::optional<std::string> description;
  std::vector<EducationalResource> resources;
  std::vector<Id> covered_topics;  // sorted, unique
  ContributorId created_by;
  Timestamp created_at{};

  friend bool operator==(const EducationalPackage&, const EducationalPackage&) = default;
};

struct AddChild {
  Id child_id;
  friend bool operator==(const AddChild&, const AddChild&) = default;
};
struct DeleteChild {
  Id child_id;
  friend bool operator==(const DeleteChild&, const DeleteChild&) = default;
};
struct ReorderChildren {
  std::vector<Id> order;
  friend bool operator==(const ReorderChildren&, const ReorderChildren&) = default;
};

/// The three crowd-editable changes to a parent's child list.
using ChildEdit = std::variant<AddChild, DeleteChild, ReorderChildren>;

/// Audit record of a child-list change. Creation-time changes carry the id of
/// the component being created; all later changes carry a suggestion id.
struct ChildChange {
  enum class Cause { creation, suggestion };
  Id parent_id;
  Cause cause = Cause::creation;
  Id cause_id;

  friend bool operator==(const ChildChange&, const ChildChange&) = default;
};

std::string_view to_string(ComponentKind kind) noexcept;
std::string_view to_string(VoteDirection direction) noexcept;
std::string_view to_string(FormatType format) noexcept;
std::string_view to_string(DetailLevel level) noexcept;
std::optional<VoteDirection> parse_direction(std::string_view text) noexcept;
std::optional<FormatType> parse_format(std::string_view text) noexcept;
std::optional<DetailLevel> parse_detail(std::string_view text) noexcept;

}  // namespace curricula::core
