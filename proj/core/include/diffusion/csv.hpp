#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace diffusion {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Minimal comma-separated table: a header row plus string cells. Blank lines
/// and lines starting with '#' are skipped. No quoting support; the formats
/// this library writes never need it.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // source line of each row

  /// Throws CsvError when the column is missing.
  std::size_t column(std::string_view name) const;
  bool has_column(std::string_view name) const;
  double number(std::size_t row, std::size_t col) const;
  std::int64_t integer(std::size_t row, std::size_t col) const;
  const std::string& text(std::size_t row, std::size_t col) const { return rows.at(row).at(col); }
};

CsvTable read_csv(std::istream& in);

/// Shortest decimal representation that round-trips; always uses '.'.
std::string format_double(double value);

/// Parses a finite or "nan" double, rejecting trailing garbage.
double parse_double(std::string_view text);

}  // namespace diffusion
