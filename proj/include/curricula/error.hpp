#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace curricula {

/// Machine-readable failure codes shared by every module. The HTTP layer maps
/// them onto status codes and echoes the name in error bodies.
enum class ErrorCode {
  // curriculum-core
  EmptyTitle,
  UnknownSkill,
  UnknownTopic,
  UnknownGoal,
  UnknownPackage,
  UnknownComponent,
  UnknownChild,
  UnknownEdge,
  DuplicateSkillInList,
  DuplicateTopicInList,
  DuplicateSkillTitle,
  DuplicateTopicTitle,
  EmptyResourceList,
  InvalidResource,
  StaleEdit,
  // text-engine
  EmptyCorpus,
  InvalidK,
  InvalidRange,
  UnlabeledDocument,
  IndexOutOfRange,
  EmptyTopWords,
  // esco-matcher
  MalformedRow,
  DanglingLink,
  EmptyTaxonomy,
  // recommender
  ProviderEmpty,
  MissingFeature,
  UnknownLabel,
  EmptyTokenList,
  // crowd-engine
  SelfAdoption,
  DuplicateOpenSuggestion,
  UnknownParent,
  InvalidPayload,
  UnknownSuggestion,
  AlreadyVoted,
  SuggestionClosed,
  InsufficientPoints,
  SelfVote,
  // content-ingest
  ProviderUnavailable,
  UnknownResource,
  // service-gateway
  CorruptLog,
  InvalidConfig,
  Unauthorized,
  BadRequest,
  UnknownJob,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  explicit Error(ErrorCode code)
      : std::runtime_error(std::string(to_string(code))), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace curricula
