#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hdrbench::csv {

// Shortest round-trip decimal; "inf" / "-inf" / "nan" for non-finite values.
std::string number(double value);
std::string number(const std::optional<double>& value);  // "" when absent

std::vector<std::string> split(std::string_view line);
std::string join(const std::vector<std::string>& fields);

// Parses a field written by number(); "" yields nullopt.
std::optional<double> parse_number(std::string_view field);

// Every emitted CSV starts with "# hdrbench:<schema> v<version>[; note]"
// followed by the column header line.
std::string schema_line(std::string_view schema, int version, std::string_view note = {});

struct Table {
  std::string schema;
  int version = 0;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Reads a file written by the writers in this project. Throws ParseError on
// a missing schema line, ragged rows, or an unexpected header.
Table read(const std::filesystem::path& path);

// Checks schema name, version and exact header. Numeric columns must parse
// with parse_number (empty allowed). Throws ParseError with the first problem.
void validate(const Table& table, std::string_view schema, int version, const std::vector<std::string>& header,
              const std::vector<std::string>& numeric_columns);

}  // namespace hdrbench::csv
