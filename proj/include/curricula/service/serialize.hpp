#pragma once

#include <string>

#include <json.hpp>

#include "curricula/core/store.hpp"
#include "curricula/crowd/engine.hpp"
#include "curricula/esco/matcher.hpp"
#include "curricula/recommender/resources.hpp"
#include "curricula/recommender/topics.hpp"

namespace curricula::service {

using nlohmann::json;

/// "2023-11-14T22:13:20Z". Throws BadRequest on parse failure.
std::string format_time(core::Timestamp t);
core::Timestamp parse_time(const std::string& text);

}  // namespace curricula::service

namespace curricula::core {

void to_json(nlohmann::json& j, const GoalContext& v);
void from_json(const nlohmann::json& j, GoalContext& v);
void to_json(nlohmann::json& j, const VoteTally& v);
void from_json(const nlohmann::json& j, VoteTally& v);
void to_json(nlohmann::json& j, const EdgeRef& v);
void from_json(const nlohmann::json& j, EdgeRef& v);
void to_json(nlohmann::json& j, const Goal& v);
void from_json(const nlohmann::json& j, Goal& v);
void to_json(nlohmann::json& j, const Skill& v);
void from_json(const nlohmann::json& j, Skill& v);
void to_json(nlohmann::json& j, const Topic& v);
void from_json(const nlohmann::json& j, Topic& v);
void to_json(nlohmann::json& j, const ResourceOrigin& v);
void from_json(const nlohmann::json& j, ResourceOrigin& v);
void to_json(nlohmann::json& j, const EducationalResource& v);
void from_json(const nlohmann::json& j, EducationalResource& v);
void to_json(nlohmann::json& j, const NewResource& v);
void from_json(const nlohmann::json& j, NewResource& v);
void to_json(nlohmann::json& j, const EducationalPackage& v);
void from_json(const nlohmann::json& j, EducationalPackage& v);
void to_json(nlohmann::json& j, const ChildChange& v);
void from_json(const nlohmann::json& j, ChildChange& v);
void to_json(nlohmann::json& j, const ChildView& v);
void to_json(nlohmann::json& j, const PageView& v);

nlohmann::json edit_to_json(const ChildEdit& edit);
/// {"kind": "add"|"delete"|"reorder", "child_id" | "order"}. Throws BadRequest.
ChildEdit edit_from_json(const nlohmann::json& j);

nlohmann::json store_to_json(const CurriculumStore& store);
CurriculumStore store_from_json(const nlohmann::json& j);

}  // namespace curricula::core

namespace curricula::crowd {

void to_json(nlohmann::json& j, const SuggestionVote& v);
void from_json(const nlohmann::json& j, SuggestionVote& v);
void to_json(nlohmann::json& j, const Suggestion& v);
void from_json(const nlohmann::json& j, Suggestion& v);
void to_json(nlohmann::json& j, const PointChange& v);
void from_json(const nlohmann::json& j, PointChange& v);

nlohmann::json crowd_to_json(const CrowdEngine& engine);
CrowdEngine crowd_from_json(const nlohmann::json& j, const ReviewConfig& config);

}  // namespace curricula::crowd

namespace curricula::recommender {

void to_json(nlohmann::json& j, const TopicCandidate& v);
void to_json(nlohmann::json& j, const ResourceRecommendation& v);
void to_json(nlohmann::json& j, const LabelScore& v);

}  // namespace curricula::recommender

namespace curricula::esco {

void to_json(nlohmann::json& j, const SkillRecommendations& v);

}  // namespace curricula::esco
