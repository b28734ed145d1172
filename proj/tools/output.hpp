#pragma once

// Result tables and their CSV / JSON / text renderings for potts3pt.

#include <cmath>
#include <cstdio>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace potts3pt {

inline constexpr int kSchemaVersion = 1;

using json = nlohmann::ordered_json;

struct Infinite {};  // a moment that diverges

using Cell = std::variant<std::monostate, double, long long, bool, std::string, Infinite>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

/// Everything a command emits: resolved configuration, result rows, summary
/// residuals, and extra provenance lines for the CSV header.
struct Output {
  Output() = default;
  explicit Output(std::string cmd) : command(std::move(cmd)) {}

  std::string command;
  json config = json::object();
  Table table;
  json residuals = json::object();
  std::vector<std::string> provenance;
};

enum class Format { csv, json, text };

namespace detail {

inline std::string printf_double(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

inline std::string csv_cell(const Cell& c) {
  struct V {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(double x) const { return std::isfinite(x) ? printf_double("%.12g", x) : "nan"; }
    std::string operator()(long long x) const { return std::to_string(x); }
    std::string operator()(bool x) const { return x ? "true" : "false"; }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(Infinite) const { return "inf"; }
  };
  return std::visit(V{}, c);
}

inline std::string text_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return "nan";
    // Tiny residuals keep their magnitude instead of printing as 0.000000.
    if (*d != 0.0 && std::abs(*d) < 5e-4) return printf_double("%.3e", *d);
    return printf_double("%.6f", *d);
  }
  return csv_cell(c);
}

inline json json_cell(const Cell& c) {
  struct V {
    json operator()(std::monostate) const { return nullptr; }
    json operator()(double x) const { return std::isfinite(x) ? json(x) : json(nullptr); }
    json operator()(long long x) const { return x; }
    json operator()(bool x) const { return x; }
    json operator()(const std::string& s) const { return s; }
    json operator()(Infinite) const { return nullptr; }
  };
  return std::visit(V{}, c);
}

}  // namespace detail

inline std::string render_csv(const Output& out) {
  std::string s = "# potts3pt " + out.command + "\n";
  s += "# schema_version: " + std::to_string(kSchemaVersion) + "\n";
  s += "# config: " + out.config.dump() + "\n";
  for (const auto& line : out.provenance) s += "# " + line + "\n";
  if (!out.residuals.empty()) s += "# residuals: " + out.residuals.dump() + "\n";
  for (std::size_t i = 0; i < out.table.columns.size(); ++i) s += (i ? "," : "") + out.table.columns[i];
  s += "\n";
  for (const auto& row : out.table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + detail::csv_cell(row[i]);
    s += "\n";
  }
  return s;
}

inline json to_json(const Output& out) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = out.command;
  j["config"] = out.config;
  json results = json::array();
  for (const auto& row : out.table.rows) {
    json r = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) r[out.table.columns[i]] = detail::json_cell(row[i]);
    results.push_back(std::move(r));
  }
  j["results"] = std::move(results);
  j["residuals"] = out.residuals;
  return j;
}

inline std::string render_json(const Output& out) { return to_json(out).dump(2) + "\n"; }

inline std::string render_text(const Output& out) {
  std::vector<std::vector<std::string>> cells;
  cells.push_back(out.table.columns);
  for (const auto& row : out.table.rows) {
    std::vector<std::string> r;
    for (const auto& c : row) r.push_back(detail::text_cell(c));
    cells.push_back(std::move(r));
  }
  std::vector<std::size_t> width(out.table.columns.size(), 0);
  for (const auto& r : cells) {
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  std::string s;
  for (const auto& r : cells) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) s += "  ";
      s += std::string(width[i] - r[i].size(), ' ') + r[i];
    }
    s += "\n";
  }
  for (const auto& [key, value] : out.residuals.items()) s += key + ": " + value.dump() + "\n";
  return s;
}

inline std::string render(const Output& out, Format f) {
  switch (f) {
    case Format::csv:
      return render_csv(out);
    case Format::json:
      return render_json(out);
    case Format::text:
      return render_text(out);
  }
  return {};
}

}  // namespace potts3pt
