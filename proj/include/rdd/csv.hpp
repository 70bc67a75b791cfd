#pragma once

#include <string>
#include <vector>

namespace rdd {

/// Rectangular numeric table with a header row; the CSV artifact format.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  void add_row(std::initializer_list<double> values);
};

/// Formats a double with 17 significant digits ("%.17g"): enough to
/// round-trip exactly and byte-stable across identical runs.
std::string format_value(double v);

/// Comma-separated, newline-terminated; an empty table yields a header-only
/// file. Throws std::runtime_error naming the path on I/O failure.
void emit_csv(const CsvTable& table, const std::string& path);

std::string to_csv(const CsvTable& table);

} // namespace rdd
