#include "fracou/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fracou/error.hpp"

namespace fracou::harness {
namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

const Table& Report::table(const std::string& name) const {
  for (const auto& t : tables) {
    if (t.name == name) return t;
  }
  throw std::out_of_range("report has no table '" + name + "'");
}

std::string format_number(double value) {
  // Shortest round-trip form; never more than 17 significant digits.
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c > 0) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out += ',';
      out += format_number(row[c]);
    }
    out += '\n';
  }
  return out;
}

Table parse_csv(const std::string& name, const std::string& text) {
  Table table;
  table.name = name;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("csv: missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  table.columns = split(line, ',');
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != table.columns.size()) {
      throw ConfigError("csv: line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                        " fields, header has " + std::to_string(table.columns.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& cell : cells) {
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
        throw ConfigError("csv: line " + std::to_string(line_no) + ": not a number: '" + cell + "'");
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

nlohmann::ordered_json to_json(const Report& report) {
  nlohmann::ordered_json j;
  j["kind"] = report.kind;
  j["provenance"] = report.provenance;
  j["summary"] = report.summary;
  nlohmann::ordered_json tables = nlohmann::ordered_json::object();
  for (const auto& t : report.tables) {
    nlohmann::ordered_json tj;
    tj["columns"] = t.columns;
    tj["rows"] = t.rows;
    tables[t.name] = std::move(tj);
  }
  j["tables"] = std::move(tables);
  return j;
}

std::vector<std::filesystem::path> emit(const Report& report, Format format,
                                        const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  if (format == Format::csv) {
    for (const auto& t : report.tables) {
      const auto path = dir / (report.kind + "_" + t.name + ".csv");
      write_file(path, to_csv(t));
      written.push_back(path);
    }
    nlohmann::ordered_json s;
    s["kind"] = report.kind;
    s["provenance"] = report.provenance;
    s["summary"] = report.summary;
    const auto path = dir / (report.kind + "_summary.json");
    write_file(path, s.dump(2) + "\n");
    written.push_back(path);
  } else {
    const auto path = dir / (report.kind + ".json");
    write_file(path, to_json(report).dump(2) + "\n");
    written.push_back(path);
  }
  return written;
}

}  // namespace fracou::harness
