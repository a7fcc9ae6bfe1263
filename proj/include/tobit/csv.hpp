#pragma once
#include <iosfwd>
#include <string>
#include <vector>

namespace tobit {

// Numeric table parsed from CSV. Quoting follows the usual conventions:
// fields may be double-quoted, embedded quotes doubled, commas allowed
// inside quotes. A header row is required and every body cell must parse
// as a number.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;  // one vector per column

  std::size_t rows() const { return data.empty() ? 0 : data[0].size(); }
  // Index of a named column, -1 when absent.
  int find(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);
CsvTable read_csv(std::istream& in, const std::string& label);

void write_csv(std::ostream& out, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& data);

}  // namespace tobit
