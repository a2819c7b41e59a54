#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace fracou::harness {

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Report {
  std::string kind;  // consistency | clt | asclt | estimate
  std::vector<Table> tables;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  nlohmann::ordered_json provenance = nlohmann::ordered_json::object();

  const Table& table(const std::string& name) const;
};

enum class Format { csv, json };

/// Shortest form with at most 17 significant digits, '.' separator,
/// independent of the global locale.
std::string format_number(double value);

/// Header row plus one line per row.
std::string to_csv(const Table& table);

Table parse_csv(const std::string& name, const std::string& text);

nlohmann::ordered_json to_json(const Report& report);

/// csv: one `<kind>_<table>.csv` per table plus `<kind>_summary.json`
/// (summary and provenance). json: a single `<kind>.json`. Returns the
/// written paths; the directory is created if needed.
std::vector<std::filesystem::path> emit(const Report& report, Format format,
                                        const std::filesystem::path& dir);

}  // namespace fracou::harness
