#include "rdd/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace rdd {

void CsvTable::add_row(std::initializer_list<double> values) {
  if (!header.empty() && values.size() != header.size())
    throw std::invalid_argument("csv: row width does not match header");
  rows.emplace_back(values);
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_csv(const CsvTable& table) {
  std::string out;
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    if (j) out += ',';
    out += table.header[j];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size())
      throw std::invalid_argument("csv: ragged table");
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ',';
      out += format_value(row[j]);
    }
    out += '\n';
  }
  return out;
}

void emit_csv(const CsvTable& table, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("csv: cannot open " + path + " for writing");
  f << to_csv(table);
  if (!f) throw std::runtime_error("csv: write failed for " + path);
}

} // namespace rdd
