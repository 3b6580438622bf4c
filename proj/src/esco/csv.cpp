#include "curricula/esco/csv.hpp"

#include <iterator>

#include "curricula/error.hpp"

namespace curricula::esco {

std::vector<CsvRecord> read_csv(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<CsvRecord> records;

  std::size_t line = 1;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    CsvRecord record;
    record.line = line;
    std::string field;
    bool record_done = false;
    bool saw_any = false;
    while (!record_done) {
      field.clear();
      if (i < n && text[i] == '"') {
        ++i;
        while (true) {
          if (i >= n) throw Error(ErrorCode::MalformedRow, "unterminated quote in record starting at line " +
                                                               std::to_string(record.line));
          if (text[i] == '"') {
            if (i + 1 < n && text[i + 1] == '"') {
              field.push_back('"');
              i += 2;
              continue;
            }
            ++i;
            break;
          }
          if (text[i] == '\n') ++line;
          field.push_back(text[i++]);
        }
        if (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r')
          throw Error(ErrorCode::MalformedRow, "unexpected character after quoted field at line " +
                                                   std::to_string(line));
      } else {
        while (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
          if (text[i] == '"')
            throw Error(ErrorCode::MalformedRow, "stray quote at line " + std::to_string(line));
          field.push_back(text[i++]);
        }
      }
      saw_any = saw_any || !field.empty();
      record.fields.push_back(field);
      if (i < n && text[i] == ',') {
        ++i;
        saw_any = true;
        continue;
      }
      if (i < n && text[i] == '\r') ++i;
      if (i < n && text[i] == '\n') ++i;
      ++line;
      record_done = true;
    }
    if (saw_any) records.push_back(std::move(record));
  }
  return records;
}

}  // namespace curricula::esco
