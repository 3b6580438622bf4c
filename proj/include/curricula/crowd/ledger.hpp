#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "curricula/core/types.hpp"

namespace curricula::crowd {

using core::ContributorId;
using core::Id;

enum class PointCause { importance_upvote, importance_revoked, adoption, material, spent };

std::string_view to_string(PointCause cause) noexcept;

/// One balance change. `delta` is the amount actually applied, so a clamped
/// revocation records less than it asked for.
struct PointChange {
  ContributorId contributor;
  Id context;
  long delta = 0;
  PointCause cause = PointCause::adoption;
  std::string cause_id;

  friend bool operator==(const PointChange&, const PointChange&) = default;
};

/// Per-contributor, per-context (skill or topic id) point balances. Balances
/// never go negative.
class PointLedger {
 public:
  long balance(const ContributorId& contributor, const Id& context) const;

  PointChange credit(const ContributorId& contributor, const Id& context, long amount, PointCause cause,
                     std::string cause_id);
  /// Throws InsufficientPoints when the balance is too small.
  PointChange spend(const ContributorId& contributor, const Id& context, long amount, std::string cause_id);
  /// Removes up to `amount`; the balance is clamped at zero.
  PointChange revoke(const ContributorId& contributor, const Id& context, long amount, std::string cause_id);

  const std::map<std::pair<ContributorId, Id>, long>& balances() const noexcept { return balances_; }
  const std::vector<PointChange>& history() const noexcept { return history_; }

  static PointLedger restore(std::map<std::pair<ContributorId, Id>, long> balances, std::vector<PointChange> history);

  friend bool operator==(const PointLedger&, const PointLedger&) = default;

 private:
  PointChange record(const ContributorId& contributor, const Id& context, long delta, PointCause cause,
                     std::string cause_id);

  std::map<std::pair<ContributorId, Id>, long> balances_;
  std::vector<PointChange> history_;
};

}  // namespace curricula::crowd
