#include "tobit/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>

#include "tobit/errors.hpp"

namespace tobit {

namespace {

// Splits one CSV record; handles quoted fields and doubled quotes.
std::vector<std::string> split_record(const std::string& line, std::size_t line_no,
                                      const std::string& label) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) {
    throw input_error(label + ": unterminated quote on line " + std::to_string(line_no));
  }
  fields.push_back(cur);
  return fields;
}

std::string trimmed(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return s.substr(b, e - b);
}

}  // namespace

int CsvTable::find(const std::string& name) const {
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] == name) return static_cast<int>(j);
  }
  return -1;
}

CsvTable read_csv(std::istream& in, const std::string& label) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw input_error(label + ": empty file (header row required)");
  ++line_no;
  for (std::string& name : split_record(line, line_no, label)) {
    table.columns.push_back(trimmed(name));
  }
  if (table.columns.empty()) throw input_error(label + ": empty header");
  table.data.assign(table.columns.size(), {});

  while (std::getline(in, line)) {
    ++line_no;
    if (trimmed(line).empty()) continue;
    const std::vector<std::string> fields = split_record(line, line_no, label);
    if (fields.size() != table.columns.size()) {
      throw input_error(label + ": line " + std::to_string(line_no) + " has " +
                        std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(table.columns.size()));
    }
    for (std::size_t j = 0; j < fields.size(); ++j) {
      const std::string cell = trimmed(fields[j]);
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size()) {
        throw input_error(label + ": line " + std::to_string(line_no) + ", column '" +
                          table.columns[j] + "': cannot parse '" + cell + "' as a number");
      }
      table.data[j].push_back(v);
    }
  }
  return table;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open file: " + path);
  return read_csv(in, path);
}

void write_csv(std::ostream& out, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& data) {
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (j) out << ',';
    out << columns[j];
  }
  out << '\n';
  const std::size_t rows = data.empty() ? 0 : data[0].size();
  char buf[40];
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < data.size(); ++j) {
      if (j) out << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", data[j][i]);
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace tobit
