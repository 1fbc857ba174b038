#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace csmaline {

/// %.17g, which round-trips every double; infinities are "inf" / "-inf".
std::string format_double(double x);

/// Plain comma-separated table; cells never contain commas or quotes.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  CsvTable& add_row(std::vector<std::string> row);
  [[nodiscard]] std::size_t column(const std::string& name) const;  // throws InvalidArgument
  [[nodiscard]] double number(std::size_t row, const std::string& name) const;
};

/// Cell helpers for building rows.
std::string cell(double x);
std::string cell(int x);
std::string cell(std::int64_t x);
std::string cell(std::uint64_t x);
inline std::string cell(const std::string& s) { return s; }
inline std::string cell(const char* s) { return s; }

std::string to_csv(const CsvTable& table);
CsvTable parse_csv(const std::string& text);

/// Parses numeric cells and re-emits them canonically; integer literals and text are kept.
std::string canonicalize_csv(const std::string& text);

std::string table_to_json(const CsvTable& table);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace csmaline
