#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "curricula/core/store.hpp"
#include "curricula/crowd/ledger.hpp"

namespace curricula::crowd {

using core::ChildEdit;
using core::CurriculumStore;
using core::Timestamp;
using core::VoteDirection;

struct ReviewConfig {
  int min_points = 10;
  std::chrono::seconds review_period = std::chrono::hours(24 * 7);
  double accept_ratio = 0.75;

  /// Throws InvalidConfig.
  void validate() const;

  friend bool operator==(const ReviewConfig&, const ReviewConfig&) = default;
};

enum class SuggestionStatus { open, accepted, rejected };
enum class RejectReason { ratio, expired, stale };

std::string_view to_string(SuggestionStatus status) noexcept;
std::string_view to_string(RejectReason reason) noexcept;

struct SuggestionVote {
  ContributorId voter;
  VoteDirection direction = VoteDirection::up;
  long spent_points = 0;

  long weight() const noexcept { return 1 + spent_points; }
  friend bool operator==(const SuggestionVote&, const SuggestionVote&) = default;
};

struct Suggestion {
  Id id;
  Id parent_id;
  ChildEdit edit;
  ContributorId submitted_by;
  Timestamp submitted_at{};
  Timestamp deadline{};
  std::vector<SuggestionVote> votes;
  SuggestionStatus status = SuggestionStatus::open;
  std::optional<RejectReason> reason;
  std::optional<Timestamp> decided_at;

  long up_weight() const noexcept;
  long total_weight() const noexcept;
  bool open() const noexcept { return status == SuggestionStatus::open; }

  friend bool operator==(const Suggestion&, const Suggestion&) = default;
};

/// Importance votes, contributor points and the suggestion lifecycle. The
/// engine holds crowd state only; the curriculum itself is passed in so the
/// caller keeps a single writer over both.
class CrowdEngine {
 public:
  explicit CrowdEngine(ReviewConfig config = {});

  /// Sets the voter's importance vote on parent->child. An up-vote on a skill
  /// or topic credits its definer one point in that context; flipping away
  /// from up revokes it. Voting on your own component earns nothing. An
  /// up-vote on a package edge counts as a material vote.
  core::VoteTally vote_importance(CurriculumStore& store, const ContributorId& voter, const Id& parent_id,
                                  const Id& child_id, VoteDirection direction);

  /// A learner adopted a skill or topic. Idempotent per (learner, component).
  /// Throws SelfAdoption, UnknownComponent.
  std::vector<PointChange> award_adoption_point(const CurriculumStore& store, const ContributorId& learner,
                                                const Id& component_id);

  /// A learner voted on a package; an up-vote credits the package contributor
  /// one point per covered topic, once per learner. Throws UnknownPackage.
  std::vector<PointChange> award_material_point(const CurriculumStore& store, const ContributorId& learner,
                                                const Id& package_id, VoteDirection direction);

  /// Throws UnknownParent, InvalidPayload, DuplicateOpenSuggestion.
  const Suggestion& submit_suggestion(const CurriculumStore& store, const ContributorId& author, const Id& parent_id,
                                      const ChildEdit& edit, Timestamp now);

  /// Records a weighted vote and decides the suggestion once its total weight
  /// reaches min_points. Throws UnknownSuggestion, SuggestionClosed, SelfVote,
  /// AlreadyVoted, InsufficientPoints, InvalidPayload.
  const Suggestion& vote_suggestion(CurriculumStore& store, const ContributorId& voter, const Id& suggestion_id,
                                    VoteDirection direction, long spend_points, Timestamp now);

  /// Rejects every open suggestion whose deadline passed before `now`.
  std::vector<Id> sweep_expired(Timestamp now);

  /// Point context of a suggestion: the parent skill/topic, or the affected
  /// skill for goal-level edits. Reordering a goal has no single context.
  std::optional<Id> context_of(const CurriculumStore& store, const Suggestion& suggestion) const;

  /// Store page with its open suggestions filled in.
  core::PageView get_page(const CurriculumStore& store, const Id& id) const;

  const Suggestion& suggestion(const Id& id) const;
  std::vector<const Suggestion*> suggestions_for(const Id& parent_id) const;

  const ReviewConfig& config() const noexcept { return config_; }
  const PointLedger& ledger() const noexcept { return ledger_; }
  const std::map<Id, Suggestion>& suggestions() const noexcept { return suggestions_; }
  const std::set<std::pair<ContributorId, Id>>& adoptions() const noexcept { return adoptions_; }
  const std::set<std::pair<ContributorId, Id>>& material_votes() const noexcept { return material_votes_; }
  long suggestion_counter() const noexcept { return counter_; }

  static CrowdEngine restore(ReviewConfig config, PointLedger ledger, std::map<Id, Suggestion> suggestions,
                             std::set<std::pair<ContributorId, Id>> adoptions,
                             std::set<std::pair<ContributorId, Id>> material_votes, long counter);

  friend bool operator==(const CrowdEngine&, const CrowdEngine&) = default;

 private:
  Suggestion& find(const Id& id);
  void decide(CurriculumStore& store, Suggestion& s, Timestamp now);

  ReviewConfig config_;
  PointLedger ledger_;
  std::map<Id, Suggestion> suggestions_;
  std::set<std::pair<ContributorId, Id>> adoptions_;
  std::set<std::pair<ContributorId, Id>> material_votes_;
  long counter_ = 0;
};

}  // namespace curricula::crowd
