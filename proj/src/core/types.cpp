#include "curricula/core/types.hpp"

#include "curricula/core/canonical.hpp"

namespace curricula::core {
namespace {

std::string trimmed_or_general(const std::string& value) {
  const auto first = value.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return kGeneral;
  const auto last = value.find_last_not_of(" \t\r\n");
  return value.substr(first, last - first + 1);
}

}  // namespace

GoalContext GoalContext::normalized() const {
  return {trimmed_or_general(industry), trimmed_or_general(company), trimmed_or_general(city),
          trimmed_or_general(country)};
}

std::optional<VoteDirection> VoteTally::cast(const ContributorId& voter, VoteDirection direction) {
  std::optional<VoteDirection> previous;
  if (auto it = voters.find(voter); it != voters.end()) {
    previous = it->second;
    (previous == VoteDirection::up ? ups : downs) -= 1;
  }
  voters[voter] = direction;
  (direction == VoteDirection::up ? ups : downs) += 1;
  return previous;
}

std::string_view to_string(ComponentKind kind) noexcept {
  switch (kind) {
    case ComponentKind::goal: return "goal";
    case ComponentKind::skill: return "skill";
    case ComponentKind::topic: return "topic";
    case ComponentKind::package: return "package";
  }
  return "";
}

std::string_view to_string(VoteDirection direction) noexcept { return direction == VoteDirection::up ? "up" : "down"; }

std::string_view to_string(FormatType format) noexcept {
  switch (format) {
    case FormatType::video: return "video";
    case FormatType::text: return "text";
    case FormatType::audio: return "audio";
    case FormatType::mixed: return "mixed";
  }
  return "";
}

std::string_view to_string(DetailLevel level) noexcept {
  switch (level) {
    case DetailLevel::overview: return "overview";
    case DetailLevel::standard: return "standard";
    case DetailLevel::deep: return "deep";
  }
  return "";
}

std::optional<VoteDirection> parse_direction(std::string_view text) noexcept {
  if (text == "up") return VoteDirection::up;
  if (text == "down") return VoteDirection::down;
  return std::nullopt;
}

std::optional<FormatType> parse_format(std::string_view text) noexcept {
  for (auto f : {FormatType::video, FormatType::text, FormatType::audio, FormatType::mixed})
    if (to_string(f) == text) return f;
  return std::nullopt;
}

std::optional<DetailLevel> parse_detail(std::string_view text) noexcept {
  for (auto d : {DetailLevel::overview, DetailLevel::standard, DetailLevel::deep})
    if (to_string(d) == text) return d;
  return std::nullopt;
}

}  // namespace curricula::core
