#include "curricula/esco/matcher.hpp"

#include <algorithm>
#include <set>

#include "curricula/core/canonical.hpp"
#include "curricula/error.hpp"
#include "curricula/esco/bleu.hpp"
#include "curricula/text/preprocess.hpp"

namespace curricula::esco {
namespace {

text::TokenList label_tokens(std::string_view label) {
  static const text::PreprocessConfig config = text::PreprocessConfig::plain();
  return text::preprocess(label, config);
}

}  // namespace

MatchResult match_occupation(std::string_view goal_title, const Taxonomy& taxonomy) {
  const auto title = label_tokens(goal_title);
  if (title.empty()) throw Error(ErrorCode::EmptyTitle, "goal title has no matchable tokens");
  if (taxonomy.occupations().empty()) throw Error(ErrorCode::EmptyTaxonomy, "no occupations loaded");

  std::optional<MatchResult> best;
  for (const auto& occupation : taxonomy.occupations()) {
    MatchResult mine{occupation.uri, occupation.preferred_label, bleu_score(title, label_tokens(occupation.preferred_label))};
    for (const auto& alt : occupation.alt_labels) {
      const double score = bleu_score(title, label_tokens(alt));
      if (score > mine.bleu) mine = {occupation.uri, alt, score};
    }
    if (!best || mine.bleu > best->bleu || (mine.bleu == best->bleu && mine.occupation_uri < best->occupation_uri))
      best = std::move(mine);
  }
  return *best;
}

SkillRecommendations recommend_skills(std::string_view goal_title, const Taxonomy& taxonomy) {
  SkillRecommendations out;
  out.match = match_occupation(goal_title, taxonomy);
  auto links = taxonomy.links_of(out.match.occupation_uri);
  std::stable_sort(links.begin(), links.end(), [](const Link* a, const Link* b) {
    return a->relation == Relation::essential && b->relation == Relation::optional;
  });
  std::set<std::string> seen;
  for (const Link* link : links) {
    if (!seen.insert(link->skill_uri).second) continue;
    out.skills.push_back({link->skill_uri, taxonomy.skill(link->skill_uri)->preferred_label, link->relation});
  }
  return out;
}

std::vector<std::string> autocomplete_skill(std::string_view prefix, const Taxonomy& taxonomy,
                                            std::span<const std::string> local_skills, std::size_t limit) {
  std::string folded = core::fold_case(prefix);
  folded.erase(0, folded.find_first_not_of(" \t"));
  if (folded.empty() || limit == 0) return {};

  std::set<std::string> seen;
  auto collect = [&](std::vector<std::pair<std::string, std::string>>& group, const std::string& title) {
    std::string key = core::canonical_title(title);
    if (key.rfind(folded, 0) == 0 && seen.insert(key).second) group.emplace_back(std::move(key), title);
  };

  std::vector<std::pair<std::string, std::string>> local;
  std::vector<std::pair<std::string, std::string>> external;
  for (const auto& title : local_skills) collect(local, title);
  for (const auto& skill : taxonomy.skills()) {
    collect(external, skill.preferred_label);
    for (const auto& alt : skill.alt_labels) collect(external, alt);
  }
  std::sort(local.begin(), local.end());
  std::sort(external.begin(), external.end());

  std::vector<std::string> out;
  for (auto* group : {&local, &external})
    for (auto& [key, title] : *group) {
      if (out.size() == limit) return out;
      out.push_back(title);
    }
  return out;
}

}  // namespace curricula::esco
