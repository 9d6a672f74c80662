#include "hdrbench/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include "hdrbench/error.hpp"

namespace hdrbench::csv {

std::string number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, ptr);
}

std::string number(const std::optional<double>& value) { return value ? number(*value) : std::string(); }

std::vector<std::string> split(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    const auto& f = fields[i];
    if (f.find_first_of(",\"\n") != std::string::npos) {
      out += '"';
      for (char c : f) {
        if (c == '"') out += '"';
        out += c;
      }
      out += '"';
    } else {
      out += f;
    }
  }
  return out;
}

std::optional<double> parse_number(std::string_view field) {
  if (field.empty()) return std::nullopt;
  if (field == "inf") return std::numeric_limits<double>::infinity();
  if (field == "-inf") return -std::numeric_limits<double>::infinity();
  if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::ParseError, "'" + std::string(field) + "' is not a number");
  }
  return value;
}

std::string schema_line(std::string_view schema, int version, std::string_view note) {
  std::string line = "# hdrbench:" + std::string(schema) + " v" + std::to_string(version);
  if (!note.empty()) line += "; " + std::string(note);
  return line;
}

Table read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  Table t;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# hdrbench:", 0) != 0) {
    throw Error(ErrorCode::ParseError, path.string() + ": missing schema line");
  }
  {
    const auto body = line.substr(11);
    const auto space = body.find(" v");
    if (space == std::string::npos) throw Error(ErrorCode::ParseError, path.string() + ": bad schema line");
    t.schema = body.substr(0, space);
    const auto end = body.find(';', space);
    const auto ver = body.substr(space + 2, end == std::string::npos ? std::string::npos : end - space - 2);
    auto [p, ec] = std::from_chars(ver.data(), ver.data() + ver.size(), t.version);
    if (ec != std::errc{}) throw Error(ErrorCode::ParseError, path.string() + ": bad schema version");
  }
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, path.string() + ": missing header");
  t.header = split(line);
  std::size_t line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split(line);
    if (fields.size() != t.header.size()) {
      throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) + ": expected " +
                                             std::to_string(t.header.size()) + " fields, got " +
                                             std::to_string(fields.size()));
    }
    t.rows.push_back(std::move(fields));
  }
  return t;
}

void validate(const Table& table, std::string_view schema, int version, const std::vector<std::string>& header,
              const std::vector<std::string>& numeric_columns) {
  if (table.schema != schema || table.version != version) {
    throw Error(ErrorCode::ParseError, "schema " + table.schema + " v" + std::to_string(table.version) +
                                           ", expected " + std::string(schema) + " v" + std::to_string(version));
  }
  if (table.header != header) throw Error(ErrorCode::ParseError, std::string(schema) + ": header mismatch");
  for (const auto& col : numeric_columns) {
    const auto it = std::find(header.begin(), header.end(), col);
    if (it == header.end()) continue;
    const auto idx = static_cast<std::size_t>(it - header.begin());
    for (const auto& row : table.rows) parse_number(row[idx]);
  }
}

}  // namespace hdrbench::csv
