#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <vector>

namespace curricula::esco {

struct CsvRecord {
  std::size_t line = 0;  // 1-based line on which the record starts
  std::vector<std::string> fields;
};

/// RFC-4180 reader: quoted fields may contain commas, doubled quotes and line
/// breaks. CRLF and LF endings are accepted. Blank lines are skipped.
/// Throws MalformedRow on an unterminated quote or stray quote.
std::vector<CsvRecord> read_csv(std::istream& in);

}  // namespace curricula::esco
