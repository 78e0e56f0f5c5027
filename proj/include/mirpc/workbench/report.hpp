#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace mirpc::workbench {

inline constexpr const char* kToolName = "mirpc";
inline constexpr const char* kToolVersion = "1.0.0";

struct Quantity {
  std::string name;
  double value;
  std::string unit;  // "1" for dimensionless
};

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Report {
  std::string command;
  nlohmann::ordered_json inputs;
  std::vector<Quantity> results;
  std::vector<std::pair<std::string, bool>> flags;
  std::vector<std::string> notes;
  std::vector<std::string> warnings;
  std::optional<Table> table;
  nlohmann::ordered_json provenance;
  std::string timestamp;  // ISO 8601 UTC; the only field that varies between runs

  void add(std::string name, double value, std::string unit) {
    results.push_back({std::move(name), value, std::move(unit)});
  }
  const Quantity* find(std::string_view name) const;
};

enum class Format { text, json, csv };

Format parse_format(std::string_view name);

nlohmann::ordered_json to_json(const Report& report);

/// Throws ConfigError when csv is requested for a report without a table.
void emit_report(const Report& report, Format format, std::ostream& out);

/// Writes to `out_path`, or stdout when empty. Throws IoError on failure.
void emit_report(const Report& report, Format format, const std::filesystem::path& out_path);

std::string utc_timestamp();

}  // namespace mirpc::workbench
