#include "curricula/core/canonical.hpp"

#include <unicode/uchar.h>
#include <unicode/unistr.h>

namespace curricula::core {

std::string fold_case(std::string_view text) {
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  s.foldCase();
  std::string out;
  s.toUTF8String(out);
  return out;
}

std::string canonical_title(std::string_view title) {
  icu::UnicodeString folded =
      icu::UnicodeString::fromUTF8(icu::StringPiece(title.data(), static_cast<int32_t>(title.size())));
  folded.foldCase();

  icu::UnicodeString collapsed;
  bool pending_space = false;
  for (int32_t i = 0; i < folded.length();) {
    const UChar32 c = folded.char32At(i);
    i += U16_LENGTH(c);
    if (u_isUWhiteSpace(c)) {
      pending_space = !collapsed.isEmpty();
      continue;
    }
    if (pending_space) collapsed.append(static_cast<UChar>(' '));
    pending_space = false;
    collapsed.append(c);
  }
  std::string out;
  collapsed.toUTF8String(out);
  return out;
}

bool has_content(std::string_view title) { return !canonical_title(title).empty(); }

}  // namespace curricula::core
