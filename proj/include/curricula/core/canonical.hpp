#pragma once

#include <string>
#include <string_view>

namespace curricula::core {

/// Unicode case-fold, trim, and collapse internal whitespace runs to one space.
/// Two titles denote the same component iff their canonical forms are equal.
std::string canonical_title(std::string_view title);

/// Unicode case-fold only.
std::string fold_case(std::string_view text);

/// True when the title has at least one non-whitespace character.
bool has_content(std::string_view title);

}  // namespace curricula::core
