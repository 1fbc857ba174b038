#include "csmaline/csv.hpp"

#include "csmaline/error.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace csmaline {

namespace {

bool is_integer_literal(const std::string& s) {
  std::size_t k = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (k == s.size()) return false;
  for (; k < s.size(); ++k) {
    if (s[k] < '0' || s[k] > '9') return false;
  }
  return true;
}

bool parse_number(const std::string& s, double& out) {
  if (s == "inf") {
    out = HUGE_VAL;
    return true;
  }
  if (s == "-inf") {
    out = -HUGE_VAL;
    return true;
  }
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  if (x == 0.0) return "0";  // no negative zero
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvTable& CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header.size()) throw InvalidArgument("csv row width does not match header");
  rows.push_back(std::move(row));
  return *this;
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] == name) return k;
  }
  throw InvalidArgument("no csv column '" + name + "'");
}

double CsvTable::number(std::size_t row, const std::string& name) const {
  double x = 0.0;
  const auto& s = rows.at(row).at(column(name));
  if (!parse_number(s, x)) throw InvalidArgument("csv cell '" + s + "' is not a number");
  return x;
}

std::string cell(double x) { return format_double(x); }
std::string cell(int x) { return std::to_string(x); }
std::string cell(std::int64_t x) { return std::to_string(x); }
std::string cell(std::uint64_t x) { return std::to_string(x); }

std::string to_csv(const CsvTable& table) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) out += ',';
      out += cells[k];
    }
    out += '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
  return out;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      table.header = split(line);
      first = false;
    } else {
      table.add_row(split(line));
    }
  }
  if (first) throw InvalidArgument("empty csv");
  return table;
}

std::string canonicalize_csv(const std::string& text) {
  CsvTable table = parse_csv(text);
  for (auto& r : table.rows) {
    for (auto& c : r) {
      double x = 0.0;
      if (!is_integer_literal(c) && parse_number(c, x)) c = format_double(x);
    }
  }
  return to_csv(table);
}

std::string table_to_json(const CsvTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t k = 0; k < r.size(); ++k) {
      double x = 0.0;
      if (is_integer_literal(r[k]) && r[k].size() < 19) {
        obj[table.header[k]] = std::stoll(r[k]);
      } else if (is_integer_literal(r[k])) {
        obj[table.header[k]] = r[k];  // beyond int64
      } else if (parse_number(r[k], x) && std::isfinite(x)) {
        obj[table.header[k]] = x;
      } else {
        obj[table.header[k]] = r[k];  // text, and "inf" which JSON cannot hold as a number
      }
    }
    rows.push_back(std::move(obj));
  }
  return rows.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw Error("write to '" + path + "' failed");
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace csmaline
