#include "curricula/esco/taxonomy.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "curricula/error.hpp"
#include "curricula/esco/csv.hpp"

namespace curricula::esco {
namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// Maps required column names to indices; throws MalformedRow on a missing one.
std::map<std::string, std::size_t> columns(const CsvRecord& header, std::initializer_list<const char*> required,
                                           const std::string& source) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.fields.size(); ++i) {
    std::string name = trim(header.fields[i]);
    // Tolerate a UTF-8 byte-order mark on the first column.
    if (i == 0 && name.rfind("\xEF\xBB\xBF", 0) == 0) name = name.substr(3);
    index.emplace(name, i);
  }
  for (const char* name : required)
    if (!index.contains(name))
      throw Error(ErrorCode::MalformedRow, source + " line " + std::to_string(header.line) + ": missing column " + name);
  return index;
}

const std::string& field(const CsvRecord& row, std::size_t column, std::size_t width, const std::string& source) {
  if (row.fields.size() != width)
    throw Error(ErrorCode::MalformedRow, source + " line " + std::to_string(row.line) + ": expected " +
                                             std::to_string(width) + " fields, got " +
                                             std::to_string(row.fields.size()));
  return row.fields[column];
}

std::vector<std::string> split_alt_labels(const std::string& raw) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    auto label = trim(current);
    if (!label.empty()) out.push_back(std::move(label));
    current.clear();
  };
  for (char c : raw) {
    if (c == '|' || c == '\n')
      flush();
    else
      current.push_back(c);
  }
  flush();
  return out;
}

std::vector<CsvRecord> read_records(std::istream& in, const std::string& source) {
  try {
    return read_csv(in);
  } catch (const Error& e) {
    throw Error(e.code(), source + ": " + e.detail());
  }
}

}  // namespace

std::vector<Concept> read_concepts(std::istream& in, const std::string& source) {
  const auto records = read_records(in, source);
  if (records.empty()) return {};
  const auto cols = columns(records.front(), {"conceptUri", "preferredLabel", "altLabels"}, source);
  const std::size_t width = records.front().fields.size();
  std::vector<Concept> out;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& row = records[r];
    Concept c;
    c.uri = trim(field(row, cols.at("conceptUri"), width, source));
    c.preferred_label = trim(field(row, cols.at("preferredLabel"), width, source));
    c.alt_labels = split_alt_labels(field(row, cols.at("altLabels"), width, source));
    if (c.uri.empty() || c.preferred_label.empty())
      throw Error(ErrorCode::MalformedRow,
                  source + " line " + std::to_string(row.line) + ": empty conceptUri or preferredLabel");
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Link> read_links(std::istream& in, const std::string& source) {
  const auto records = read_records(in, source);
  if (records.empty()) return {};
  const auto cols = columns(records.front(), {"occupationUri", "relationType", "skillUri"}, source);
  const std::size_t width = records.front().fields.size();
  std::vector<Link> out;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& row = records[r];
    Link link;
    link.occupation_uri = trim(field(row, cols.at("occupationUri"), width, source));
    link.skill_uri = trim(field(row, cols.at("skillUri"), width, source));
    const std::string relation = trim(field(row, cols.at("relationType"), width, source));
    if (relation == "essential")
      link.relation = Relation::essential;
    else if (relation == "optional")
      link.relation = Relation::optional;
    else
      throw Error(ErrorCode::MalformedRow,
                  source + " line " + std::to_string(row.line) + ": unknown relationType '" + relation + "'");
    link.rank = out.size();
    out.push_back(std::move(link));
  }
  return out;
}

Taxonomy::Taxonomy(std::vector<Concept> occupations, std::vector<Concept> skills, std::vector<Link> links)
    : occupations_(std::move(occupations)), skills_(std::move(skills)), links_(std::move(links)) {
  for (std::size_t i = 0; i < occupations_.size(); ++i)
    if (!occupation_index_.emplace(occupations_[i].uri, i).second)
      throw Error(ErrorCode::MalformedRow, "duplicate occupation URI " + occupations_[i].uri);
  for (std::size_t i = 0; i < skills_.size(); ++i)
    if (!skill_index_.emplace(skills_[i].uri, i).second)
      throw Error(ErrorCode::MalformedRow, "duplicate skill URI " + skills_[i].uri);
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const auto& link = links_[i];
    if (!occupation_index_.contains(link.occupation_uri))
      throw Error(ErrorCode::DanglingLink, "unknown occupation " + link.occupation_uri);
    if (!skill_index_.contains(link.skill_uri))
      throw Error(ErrorCode::DanglingLink, "unknown skill " + link.skill_uri);
    links_by_occupation_[link.occupation_uri].push_back(i);
  }
}

const Concept* Taxonomy::occupation(const std::string& uri) const {
  auto it = occupation_index_.find(uri);
  return it == occupation_index_.end() ? nullptr : &occupations_[it->second];
}

const Concept* Taxonomy::skill(const std::string& uri) const {
  auto it = skill_index_.find(uri);
  return it == skill_index_.end() ? nullptr : &skills_[it->second];
}

std::vector<const Link*> Taxonomy::links_of(const std::string& occupation_uri) const {
  std::vector<const Link*> out;
  if (auto it = links_by_occupation_.find(occupation_uri); it != links_by_occupation_.end())
    for (std::size_t i : it->second) out.push_back(&links_[i]);
  return out;
}

Taxonomy load_taxonomy(const std::filesystem::path& occupations, const std::filesystem::path& skills,
                       const std::filesystem::path& relations) {
  auto open = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrorCode::MalformedRow, "cannot open " + p.string());
    return in;
  };
  auto occ_in = open(occupations);
  auto skill_in = open(skills);
  auto rel_in = open(relations);
  return Taxonomy(read_concepts(occ_in, occupations.filename().string()),
                  read_concepts(skill_in, skills.filename().string()),
                  read_links(rel_in, relations.filename().string()));
}

}  // namespace curricula::esco
