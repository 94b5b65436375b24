#include "chiralrbm/table.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "chiralrbm/errors.hpp"

namespace chiralrbm {

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw Error("row width does not match the column count");
  rows.push_back(std::move(row));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

struct CsvCell {
  std::string operator()(std::int64_t v) const { return std::to_string(v); }
  std::string operator()(double v) const { return format_double(v); }
  std::string operator()(const std::string& v) const {
    if (v.find_first_of(",\"\n") == std::string::npos) return v;
    std::string quoted = "\"";
    for (char c : v) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    return quoted + '"';
  }
};

struct JsonCell {
  nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
  nlohmann::ordered_json operator()(double v) const {
    if (!std::isfinite(v)) return nullptr;
    return v;
  }
  nlohmann::ordered_json operator()(const std::string& v) const { return v; }
};

}  // namespace

void write_csv(const Table& table, std::ostream& os) {
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    os << (c ? "," : "") << table.columns[c];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << std::visit(CsvCell{}, row[c]);
    os << '\n';
  }
}

nlohmann::ordered_json columns_json(const Table& table) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    auto column = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) column.push_back(std::visit(JsonCell{}, row[c]));
    out[table.columns[c]] = std::move(column);
  }
  return out;
}

}  // namespace chiralrbm
