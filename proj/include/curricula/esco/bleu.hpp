#pragma once

#include <span>
#include <string>

namespace curricula::esco {

/// Sentence BLEU of `candidate` against one reference with n-gram orders up to
/// min(2, |candidate|). An order whose clipped precision is zero is smoothed
/// to 1 / (total + 1); other orders are unsmoothed, so identical inputs score
/// exactly 1. Brevity penalty min(1, exp(1 - r / c)). Empty candidate -> 0.
double bleu_score(std::span<const std::string> candidate, std::span<const std::string> reference);

}  // namespace curricula::esco
