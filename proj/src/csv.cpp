#include "mirpc/csv.hpp"

#include <istream>
#include <stdexcept>

#include "mirpc/errors.hpp"

namespace mirpc::csv {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

Row split_record(std::string_view line) {
  Row out;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
      was_quoted = true;
    } else if (ch == ',') {
      out.push_back(was_quoted ? field : std::string(trim(field)));
      field.clear();
      was_quoted = false;
    } else {
      field.push_back(ch);
    }
  }
  if (quoted) throw ConfigError("unterminated quoted CSV field");
  out.push_back(was_quoted ? field : std::string(trim(field)));
  return out;
}

Document read(std::istream& in) {
  Document doc;
  bool have_header = false;
  std::string line;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto row = split_record(t);
    if (!have_header) {
      doc.header = std::move(row);
      have_header = true;
    } else {
      doc.rows.push_back(std::move(row));
    }
  }
  if (!have_header) throw ConfigError("CSV input has no header row");
  return doc;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

double parse_double(const std::string& field, std::string_view what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse " + std::string(what) + " value '" + field + "'");
  }
}

}  // namespace mirpc::csv
