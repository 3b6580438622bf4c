#include "curricula/esco/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

namespace curricula::esco {
namespace {

using Gram = std::vector<std::string>;

std::map<Gram, int> ngram_counts(std::span<const std::string> tokens, std::size_t n) {
  std::map<Gram, int> counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) ++counts[Gram(tokens.begin() + i, tokens.begin() + i + n)];
  return counts;
}

}  // namespace

double bleu_score(std::span<const std::string> candidate, std::span<const std::string> reference) {
  if (candidate.empty()) return 0.0;
  const std::size_t max_order = std::min<std::size_t>(2, candidate.size());

  double log_sum = 0.0;
  for (std::size_t n = 1; n <= max_order; ++n) {
    const auto cand = ngram_counts(candidate, n);
    const auto ref = ngram_counts(reference, n);
    int matches = 0;
    int total = 0;
    for (const auto& [gram, count] : cand) {
      total += count;
      if (auto it = ref.find(gram); it != ref.end()) matches += std::min(count, it->second);
    }
    const double precision = matches > 0 ? static_cast<double>(matches) / total : 1.0 / (total + 1.0);
    log_sum += std::log(precision);
  }

  const double c = static_cast<double>(candidate.size());
  const double r = static_cast<double>(reference.size());
  const double brevity = std::min(1.0, std::exp(1.0 - r / c));
  return brevity * std::exp(log_sum / static_cast<double>(max_order));
}

}  // namespace curricula::esco
