#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace hess {

// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

// Headered numeric CSV held column-wise.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  std::size_t rows() const { return columns.empty() ? 0 : columns[0].size(); }
  // Throws InputError when the column is missing.
  const std::vector<double>& column(std::string_view name) const;
};

// Throws InputError on ragged rows or non-numeric cells (message names the
// line and column).
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

void write_csv(const CsvTable& table, std::ostream& out);

}  // namespace hess
