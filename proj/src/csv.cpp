#include "polariton/csv.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace polariton {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

void write_csv_preamble(std::ostream& os, std::string_view kind,
                        const std::vector<std::string>& columns) {
  os << "# schema=polariton." << kind << " version=" << kCsvSchemaVersion << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) os << ',';
    os << columns[i];
  }
  os << '\n';
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15e", value);
  return buf;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  CsvTable table;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (table.schema.empty() && table.columns.empty()) table.schema = line;
      continue;
    }
    auto cells = split_line(line);
    if (table.columns.empty()) {
      table.columns = std::move(cells);
      continue;
    }
    if (cells.size() != table.columns.size()) {
      throw std::runtime_error(path + ": row " + std::to_string(table.rows.size() + 1) + " has " +
                               std::to_string(cells.size()) + " cells, expected " +
                               std::to_string(table.columns.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  return table;
}

}  // namespace polariton
