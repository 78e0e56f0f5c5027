#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace mirpc::csv {

using Row = std::vector<std::string>;

/// Splits one CSV record. Double-quoted fields may contain commas and
/// doubled quotes.
Row split_record(std::string_view line);

/// Reads a CSV stream whose first non-blank line is a header. Blank lines
/// and lines starting with '#' are skipped.
struct Document {
  Row header;
  std::vector<Row> rows;
};
Document read(std::istream& in);

/// Quotes a field if it contains a comma, quote, or newline.
std::string escape(std::string_view field);

double parse_double(const std::string& field, std::string_view what);

}  // namespace mirpc::csv
