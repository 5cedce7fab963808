#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace polariton {

inline constexpr int kCsvSchemaVersion = 1;

// Every CSV starts with "# schema=polariton.<kind> version=<n>" followed by
// the column header.
void write_csv_preamble(std::ostream& os, std::string_view kind,
                        const std::vector<std::string>& columns);

// Fixed "%.15e" formatting so repeated runs are byte-identical.
std::string format_number(double value);

struct CsvTable {
  std::string schema;  // the "# ..." line, empty if absent
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

/// Throws std::runtime_error on I/O failure or ragged rows.
CsvTable read_csv(const std::string& path);

}  // namespace polariton
