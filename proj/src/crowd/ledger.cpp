#include "curricula/crowd/ledger.hpp"

#include <algorithm>

#include "curricula/error.hpp"

namespace curricula::crowd {

std::string_view to_string(PointCause cause) noexcept {
  switch (cause) {
    case PointCause::importance_upvote: return "importance_upvote";
    case PointCause::importance_revoked: return "importance_revoked";
    case PointCause::adoption: return "adoption";
    case PointCause::material: return "material";
    case PointCause::spent: return "spent";
  }
  return "";
}

long PointLedger::balance(const ContributorId& contributor, const Id& context) const {
  auto it = balances_.find({contributor, context});
  return it == balances_.end() ? 0 : it->second;
}

PointChange PointLedger::record(const ContributorId& contributor, const Id& context, long delta, PointCause cause,
                                std::string cause_id) {
  long& value = balances_[{contributor, context}];
  value += delta;
  if (value == 0) balances_.erase({contributor, context});
  PointChange change{contributor, context, delta, cause, std::move(cause_id)};
  history_.push_back(change);
  return change;
}

PointChange PointLedger::credit(const ContributorId& contributor, const Id& context, long amount, PointCause cause,
                                std::string cause_id) {
  return record(contributor, context, amount, cause, std::move(cause_id));
}

PointChange PointLedger::spend(const ContributorId& contributor, const Id& context, long amount,
                               std::string cause_id) {
  const long available = balance(contributor, context);
  if (amount > available)
    throw Error(ErrorCode::InsufficientPoints, contributor + " has " + std::to_string(available) + " points in " +
                                                   context + ", needs " + std::to_string(amount));
  return record(contributor, context, -amount, PointCause::spent, std::move(cause_id));
}

PointChange PointLedger::revoke(const ContributorId& contributor, const Id& context, long amount,
                                std::string cause_id) {
  const long taken = std::min(amount, balance(contributor, context));
  return record(contributor, context, -taken, PointCause::importance_revoked, std::move(cause_id));
}

PointLedger PointLedger::restore(std::map<std::pair<ContributorId, Id>, long> balances,
                                 std::vector<PointChange> history) {
  PointLedger ledger;
  ledger.balances_ = std::move(balances);
  ledger.history_ = std::move(history);
  return ledger;
}

}  // namespace curricula::crowd
