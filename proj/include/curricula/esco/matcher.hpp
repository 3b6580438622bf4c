#pragma once

#include <span>
#include <string>
#include <vector>

#include "curricula/esco/taxonomy.hpp"

namespace curricula::esco {

struct MatchResult {
  std::string occupation_uri;
  std::string matched_label;
  double bleu = 0.0;
};

/// Closest occupation by BLEU of the title against every preferred and
/// alternative label (lowercased, punctuation stripped, unstemmed). Ties go to
/// the smallest URI. Throws EmptyTitle / EmptyTaxonomy.
MatchResult match_occupation(std::string_view goal_title, const Taxonomy& taxonomy);

struct SkillRecommendation {
  std::string skill_uri;
  std::string label;
  Relation relation = Relation::essential;
};

struct SkillRecommendations {
  MatchResult match;
  std::vector<SkillRecommendation> skills;
};

/// Skills linked to the closest occupation: essential before optional, load
/// order within each class, each skill once.
SkillRecommendations recommend_skills(std::string_view goal_title, const Taxonomy& taxonomy);

/// Case-insensitive prefix completion over taxonomy skill labels and local
/// skill titles, deduplicated by canonical form. Local titles come first, each
/// group alphabetical. Empty prefix yields nothing.
std::vector<std::string> autocomplete_skill(std::string_view prefix, const Taxonomy& taxonomy,
                                            std::span<const std::string> local_skills, std::size_t limit = 10);

}  // namespace curricula::esco
