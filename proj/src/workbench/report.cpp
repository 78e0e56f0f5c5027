#include "mirpc/workbench/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mirpc/csv.hpp"
#include "mirpc/errors.hpp"

namespace mirpc::workbench {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_cell(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  return std::get<std::string>(cell);
}

nlohmann::ordered_json cell_json(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return *i;
  return std::get<std::string>(cell);
}

void write_text(const Report& r, std::ostream& out) {
  out << kToolName << " " << r.command << "\n";
  std::size_t width = 0;
  for (const auto& q : r.results) width = std::max(width, q.name.size());
  for (const auto& [name, _] : r.flags) width = std::max(width, name.size());
  for (const auto& q : r.results) {
    out << "  " << q.name << std::string(width - q.name.size(), ' ') << " = "
        << format_double(q.value) << " [" << q.unit << "]\n";
  }
  for (const auto& [name, value] : r.flags) {
    out << "  " << name << std::string(width - name.size(), ' ') << " = "
        << (value ? "yes" : "no") << "\n";
  }
  if (r.table) {
    out << "\n  " << r.table->columns.size() << "-column table, " << r.table->rows.size()
        << " rows (use --format csv for the full table)\n";
    const std::size_t shown = std::min<std::size_t>(r.table->rows.size(), 20);
    out << "  ";
    for (std::size_t c = 0; c < r.table->columns.size(); ++c) {
      out << (c ? "\t" : "") << r.table->columns[c];
    }
    out << "\n";
    for (std::size_t i = 0; i < shown; ++i) {
      out << "  ";
      for (std::size_t c = 0; c < r.table->rows[i].size(); ++c) {
        out << (c ? "\t" : "") << format_cell(r.table->rows[i][c]);
      }
      out << "\n";
    }
    if (shown < r.table->rows.size()) out << "  ...\n";
  }
  for (const auto& n : r.notes) out << "note: " << n << "\n";
  for (const auto& w : r.warnings) out << "warning: " << w << "\n";
}

void write_csv(const Report& r, std::ostream& out) {
  if (!r.table) {
    throw ConfigError("csv output needs a tabular result; '" + r.command + "' has none");
  }
  for (std::size_t c = 0; c < r.table->columns.size(); ++c) {
    out << (c ? "," : "") << csv::escape(r.table->columns[c]);
  }
  out << "\n";
  for (const auto& row : r.table->rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << (c ? "," : "") << csv::escape(format_cell(row[c]));
    }
    out << "\n";
  }
}

}  // namespace

const Quantity* Report::find(std::string_view name) const {
  for (const auto& q : results) {
    if (q.name == name) return &q;
  }
  return nullptr;
}

Format parse_format(std::string_view name) {
  if (name == "text") return Format::text;
  if (name == "json") return Format::json;
  if (name == "csv") return Format::csv;
  throw ConfigError("unknown output format '" + std::string(name) + "'");
}

nlohmann::ordered_json to_json(const Report& r) {
  nlohmann::ordered_json j;
  j["command"] = r.command;
  j["inputs"] = r.inputs;
  auto& results = j["results"] = nlohmann::ordered_json::object();
  for (const auto& q : r.results) results[q.name] = {{"value", q.value}, {"unit", q.unit}};
  auto& flags = j["flags"] = nlohmann::ordered_json::object();
  for (const auto& [name, value] : r.flags) flags[name] = value;
  j["notes"] = r.notes;
  j["warnings"] = r.warnings;
  if (r.table) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : r.table->rows) {
      nlohmann::ordered_json jr = nlohmann::ordered_json::array();
      for (const auto& c : row) jr.push_back(cell_json(c));
      rows.push_back(std::move(jr));
    }
    j["table"] = {{"columns", r.table->columns}, {"rows", std::move(rows)}};
  } else {
    j["table"] = nullptr;
  }
  j["provenance"] = r.provenance;
  j["timestamp"] = r.timestamp;
  return j;
}

void emit_report(const Report& report, Format format, std::ostream& out) {
  switch (format) {
    case Format::text: write_text(report, out); break;
    case Format::json: out << to_json(report).dump(2) << "\n"; break;
    case Format::csv: write_csv(report, out); break;
  }
  if (!out) throw IoError("failed writing report");
}

void emit_report(const Report& report, Format format, const std::filesystem::path& out_path) {
  if (out_path.empty()) {
    emit_report(report, format, std::cout);
    std::cout.flush();
    return;
  }
  // Render first so a csv/table mismatch never leaves a truncated file.
  std::ostringstream buffer;
  emit_report(report, format, buffer);
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw IoError("cannot open output file " + out_path.string());
  file << buffer.str();
  if (!file) throw IoError("failed writing " + out_path.string());
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace mirpc::workbench
