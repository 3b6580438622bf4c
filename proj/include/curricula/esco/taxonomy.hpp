#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace curricula::esco {

struct Concept {
  std::string uri;
  std::string preferred_label;
  std::vector<std::string> alt_labels;
};

enum class Relation { essential, optional };

struct Link {
  std::string occupation_uri;
  std::string skill_uri;
  Relation relation = Relation::essential;
  std::size_t rank = 0;  // load order
};

/// Occupations, skills and occupation->skill links. Immutable after load.
class Taxonomy {
 public:
  Taxonomy() = default;
  /// Validates URI uniqueness and link endpoints (MalformedRow / DanglingLink).
  Taxonomy(std::vector<Concept> occupations, std::vector<Concept> skills, std::vector<Link> links);

  const std::vector<Concept>& occupations() const noexcept { return occupations_; }
  const std::vector<Concept>& skills() const noexcept { return skills_; }
  const std::vector<Link>& links() const noexcept { return links_; }

  const Concept* occupation(const std::string& uri) const;
  const Concept* skill(const std::string& uri) const;
  /// Links of one occupation in load order.
  std::vector<const Link*> links_of(const std::string& occupation_uri) const;

 private:
  std::vector<Concept> occupations_;
  std::vector<Concept> skills_;
  std::vector<Link> links_;
  std::unordered_map<std::string, std::size_t> occupation_index_;
  std::unordered_map<std::string, std::size_t> skill_index_;
  std::unordered_map<std::string, std::vector<std::size_t>> links_by_occupation_;
};

/// Concept CSV: header with `conceptUri,preferredLabel,altLabels`; alt labels
/// separated by '|' or line breaks. Extra columns are ignored by name.
std::vector<Concept> read_concepts(std::istream& in, const std::string& source);

/// Relation CSV: header with `occupationUri,relationType,skillUri`.
std::vector<Link> read_links(std::istream& in, const std::string& source);

Taxonomy load_taxonomy(const std::filesystem::path& occupations, const std::filesystem::path& skills,
                       const std::filesystem::path& relations);

}  // namespace curricula::esco
