#include "curricula/error.hpp"

namespace curricula {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyTitle: return "EmptyTitle";
    case ErrorCode::UnknownSkill: return "UnknownSkill";
    case ErrorCode::UnknownTopic: return "UnknownTopic";
    case ErrorCode::UnknownGoal: return "UnknownGoal";
    case ErrorCode::UnknownPackage: return "UnknownPackage";
    case ErrorCode::UnknownComponent: return "UnknownComponent";
    case ErrorCode::UnknownChild: return "UnknownChild";
    case ErrorCode::UnknownEdge: return "UnknownEdge";
    case ErrorCode::DuplicateSkillInList: return "DuplicateSkillInList";
    case ErrorCode::DuplicateTopicInList: return "DuplicateTopicInList";
    case ErrorCode::DuplicateSkillTitle: return "DuplicateSkillTitle";
    case ErrorCode::DuplicateTopicTitle: return "DuplicateTopicTitle";
    case ErrorCode::EmptyResourceList: return "EmptyResourceList";
    case ErrorCode::InvalidResource: return "InvalidResource";
    case ErrorCode::StaleEdit: return "StaleEdit";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::InvalidK: return "InvalidK";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::UnlabeledDocument: return "UnlabeledDocument";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::EmptyTopWords: return "EmptyTopWords";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::DanglingLink: return "DanglingLink";
    case ErrorCode::EmptyTaxonomy: return "EmptyTaxonomy";
    case ErrorCode::ProviderEmpty: return "ProviderEmpty";
    case ErrorCode::MissingFeature: return "MissingFeature";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::EmptyTokenList: return "EmptyTokenList";
    case ErrorCode::SelfAdoption: return "SelfAdoption";
    case ErrorCode::DuplicateOpenSuggestion: return "DuplicateOpenSuggestion";
    case ErrorCode::UnknownParent: return "UnknownParent";
    case ErrorCode::InvalidPayload: return "InvalidPayload";
    case ErrorCode::UnknownSuggestion: return "UnknownSuggestion";
    case ErrorCode::AlreadyVoted: return "AlreadyVoted";
    case ErrorCode::SuggestionClosed: return "SuggestionClosed";
    case ErrorCode::InsufficientPoints: return "InsufficientPoints";
    case ErrorCode::SelfVote: return "SelfVote";
    case ErrorCode::ProviderUnavailable: return "ProviderUnavailable";
    case ErrorCode::UnknownResource: return "UnknownResource";
    case ErrorCode::CorruptLog: return "CorruptLog";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Unauthorized: return "Unauthorized";
    case ErrorCode::BadRequest: return "BadRequest";
    case ErrorCode::UnknownJob: return "UnknownJob";
  }
  return "Unknown";
}

}  // namespace curricula
