#include "curricula/crowd/engine.hpp"

#include <algorithm>

#include "curricula/error.hpp"

namespace curricula::crowd {

using core::AddChild;
using core::ComponentKind;
using core::DeleteChild;
using core::ReorderChildren;

namespace {

long numeric_suffix(const Id& id) {
  const auto dash = id.rfind('-');
  try {
    return dash == std::string::npos ? 0 : std::stol(id.substr(dash + 1));
  } catch (const std::exception&) {
    return 0;
  }
}

bool earns_points(ComponentKind kind) { return kind == ComponentKind::skill || kind == ComponentKind::topic; }

}  // namespace

void ReviewConfig::validate() const {
  if (min_points < 1) throw Error(ErrorCode::InvalidConfig, "review.min_points must be >= 1");
  if (!(accept_ratio > 0.0 && accept_ratio < 1.0))
    throw Error(ErrorCode::InvalidConfig, "review.accept_ratio must lie in (0, 1)");
  if (review_period <= std::chrono::seconds::zero())
    throw Error(ErrorCode::InvalidConfig, "review.period_hours must be positive");
}

std::string_view to_string(SuggestionStatus status) noexcept {
  switch (status) {
    case SuggestionStatus::open: return "Open";
    case SuggestionStatus::accepted: return "Accepted";
    case SuggestionStatus::rejected: return "Rejected";
  }
  return "";
}

std::string_view to_string(RejectReason reason) noexcept {
  switch (reason) {
    case RejectReason::ratio: return "ratio";
    case RejectReason::expired: return "expired";
    case RejectReason::stale: return "stale";
  }
  return "";
}

long Suggestion::up_weight() const noexcept {
  long sum = 0;
  for (const auto& v : votes)
    if (v.direction == VoteDirection::up) sum += v.weight();
  return sum;
}

long Suggestion::total_weight() const noexcept {
  long sum = 0;
  for (const auto& v : votes) sum += v.weight();
  return sum;
}

CrowdEngine::CrowdEngine(ReviewConfig config) : config_(config) { config_.validate(); }

core::VoteTally CrowdEngine::vote_importance(CurriculumStore& store, const ContributorId& voter, const Id& parent_id,
                                             const Id& child_id, VoteDirection direction) {
  const auto previous = store.vote_edge(parent_id, child_id, voter, direction);
  const auto kind = store.kind_of(child_id);
  if (kind && earns_points(*kind)) {
    const ContributorId& definer = store.definer(child_id);
    const std::string cause = parent_id + "->" + child_id;
    if (definer != voter) {
      const bool was_up = previous == VoteDirection::up;
      const bool is_up = direction == VoteDirection::up;
      if (is_up && !was_up) ledger_.credit(definer, child_id, 1, PointCause::importance_upvote, cause);
      if (was_up && !is_up) ledger_.revoke(definer, child_id, 1, cause);
    }
  } else if (kind == ComponentKind::package) {
    award_material_point(store, voter, child_id, direction);
  }
  for (const auto& edge : store.children(parent_id))
    if (edge.child_id == child_id) return edge.tally;
  return {};
}

std::vector<PointChange> CrowdEngine::award_adoption_point(const CurriculumStore& store, const ContributorId& learner,
                                                           const Id& component_id) {
  const auto kind = store.kind_of(component_id);
  if (!kind || !earns_points(*kind)) throw Error(ErrorCode::UnknownComponent, component_id + " is not a skill or topic");
  const ContributorId& definer = store.definer(component_id);
  if (definer == learner) throw Error(ErrorCode::SelfAdoption, learner + " defined " + component_id);
  if (!adoptions_.insert({learner, component_id}).second) return {};
  return {ledger_.credit(definer, component_id, 1, PointCause::adoption, learner)};
}

std::vector<PointChange> CrowdEngine::award_material_point(const CurriculumStore& store, const ContributorId& learner,
                                                           const Id& package_id, VoteDirection direction) {
  const auto* package = store.package(package_id);
  if (!package) throw Error(ErrorCode::UnknownPackage, package_id);
  if (direction != VoteDirection::up || learner == package->created_by) return {};
  if (!material_votes_.insert({learner, package_id}).second) return {};
  std::vector<PointChange> changes;
  for (const auto& topic : package->covered_topics)
    changes.push_back(ledger_.credit(package->created_by, topic, 1, PointCause::material, package_id));
  return changes;
}

const Suggestion& CrowdEngine::submit_suggestion(const CurriculumStore& store, const ContributorId& author,
                                                 const Id& parent_id, const ChildEdit& edit, Timestamp now) {
  const auto parent_kind = store.kind_of(parent_id);
  if (!parent_kind || !CurriculumStore::child_kind(*parent_kind)) throw Error(ErrorCode::UnknownParent, parent_id);
  const auto child_kind = *CurriculumStore::child_kind(*parent_kind);
  const auto& children = store.children(parent_id);
  auto present = [&](const Id& id) {
    return std::any_of(children.begin(), children.end(), [&](const auto& e) { return e.child_id == id; });
  };

  if (const auto* add = std::get_if<AddChild>(&edit)) {
    if (store.kind_of(add->child_id) != child_kind)
      throw Error(ErrorCode::InvalidPayload, add->child_id + " cannot be a child of " + parent_id);
    if (present(add->child_id)) throw Error(ErrorCode::InvalidPayload, add->child_id + " is already a child");
  } else if (const auto* del = std::get_if<DeleteChild>(&edit)) {
    if (!present(del->child_id)) throw Error(ErrorCode::InvalidPayload, del->child_id + " is not a child");
  } else {
    std::vector<Id> proposed = std::get<ReorderChildren>(edit).order;
    std::vector<Id> current;
    for (const auto& e : children) current.push_back(e.child_id);
    std::sort(proposed.begin(), proposed.end());
    std::sort(current.begin(), current.end());
    if (proposed != current) throw Error(ErrorCode::InvalidPayload, "not a permutation of the current children");
  }

  for (const auto& [id, s] : suggestions_)
    if (s.open() && s.parent_id == parent_id && s.edit == edit) throw Error(ErrorCode::DuplicateOpenSuggestion, id);

  Suggestion s;
  s.id = "suggestion-" + std::to_string(++counter_);
  s.parent_id = parent_id;
  s.edit = edit;
  s.submitted_by = author;
  s.submitted_at = now;
  s.deadline = now + config_.review_period;
  const Id id = s.id;
  return suggestions_.emplace(id, std::move(s)).first->second;
}

std::optional<Id> CrowdEngine::context_of(const CurriculumStore& store, const Suggestion& s) const {
  if (store.kind_of(s.parent_id) != ComponentKind::goal) return s.parent_id;
  if (const auto* add = std::get_if<AddChild>(&s.edit)) return add->child_id;
  if (const auto* del = std::get_if<DeleteChild>(&s.edit)) return del->child_id;
  return std::nullopt;
}

Suggestion& CrowdEngine::find(const Id& id) {
  auto it = suggestions_.find(id);
  if (it == suggestions_.end()) throw Error(ErrorCode::UnknownSuggestion, id);
  return it->second;
}

const Suggestion& CrowdEngine::suggestion(const Id& id) const { return const_cast<CrowdEngine*>(this)->find(id); }

const Suggestion& CrowdEngine::vote_suggestion(CurriculumStore& store, const ContributorId& voter,
                                               const Id& suggestion_id, VoteDirection direction, long spend_points,
                                               Timestamp now) {
  Suggestion& s = find(suggestion_id);
  if (!s.open()) throw Error(ErrorCode::SuggestionClosed, s.id + " is " + std::string(to_string(s.status)));
  if (now > s.deadline) throw Error(ErrorCode::SuggestionClosed, s.id + " passed its deadline");
  if (voter == s.submitted_by) throw Error(ErrorCode::SelfVote, voter + " submitted " + s.id);
  if (std::any_of(s.votes.begin(), s.votes.end(), [&](const auto& v) { return v.voter == voter; }))
    throw Error(ErrorCode::AlreadyVoted, voter + " on " + s.id);
  if (spend_points < 0) throw Error(ErrorCode::InvalidPayload, "spend_points must be >= 0");

  if (spend_points > 0) {
    const auto context = context_of(store, s);
    if (!context) throw Error(ErrorCode::InsufficientPoints, "reordering a goal has no point context");
    ledger_.spend(voter, *context, spend_points, s.id);
  }
  s.votes.push_back({voter, direction, spend_points});
  if (s.total_weight() >= config_.min_points) decide(store, s, now);
  return s;
}

void CrowdEngine::decide(CurriculumStore& store, Suggestion& s, Timestamp now) {
  s.decided_at = now;
  const double ratio = static_cast<double>(s.up_weight()) / static_cast<double>(s.total_weight());
  if (!(ratio > config_.accept_ratio)) {
    s.status = SuggestionStatus::rejected;
    s.reason = RejectReason::ratio;
    return;
  }
  try {
    store.apply_accepted_edit(s.parent_id, s.edit, s.id);
    s.status = SuggestionStatus::accepted;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::StaleEdit && e.code() != ErrorCode::UnknownChild) throw;
    s.status = SuggestionStatus::rejected;
    s.reason = RejectReason::stale;
  }
}

std::vector<Id> CrowdEngine::sweep_expired(Timestamp now) {
  std::vector<Id> decided;
  for (auto& [id, s] : suggestions_) {
    if (s.open() && s.deadline < now && s.total_weight() < config_.min_points) {
      s.status = SuggestionStatus::rejected;
      s.reason = RejectReason::expired;
      s.decided_at = now;
      decided.push_back(id);
    }
  }
  std::sort(decided.begin(), decided.end(),
            [](const Id& a, const Id& b) { return numeric_suffix(a) < numeric_suffix(b); });
  return decided;
}

std::vector<const Suggestion*> CrowdEngine::suggestions_for(const Id& parent_id) const {
  std::vector<const Suggestion*> out;
  for (const auto& [id, s] : suggestions_)
    if (s.parent_id == parent_id) out.push_back(&s);
  std::sort(out.begin(), out.end(),
            [](const Suggestion* a, const Suggestion* b) { return numeric_suffix(a->id) < numeric_suffix(b->id); });
  return out;
}

core::PageView CrowdEngine::get_page(const CurriculumStore& store, const Id& id) const {
  core::PageView page = store.get_page(id);
  for (const auto* s : suggestions_for(id))
    if (s->open()) page.open_suggestions.push_back(s->id);
  return page;
}

CrowdEngine CrowdEngine::restore(ReviewConfig config, PointLedger ledger, std::map<Id, Suggestion> suggestions,
                                 std::set<std::pair<ContributorId, Id>> adoptions,
                                 std::set<std::pair<ContributorId, Id>> material_votes, long counter) {
  CrowdEngine engine(config);
  engine.ledger_ = std::move(ledger);
  engine.suggestions_ = std::move(suggestions);
  engine.adoptions_ = std::move(adoptions);
  engine.material_votes_ = std::move(material_votes);
  engine.counter_ = counter;
  return engine;
}

}  // namespace curricula::crowd
