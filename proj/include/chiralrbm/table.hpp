#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace chiralrbm {

using Cell = std::variant<std::int64_t, double, std::string>;

/// Column-named rows, written either as CSV or as JSON column arrays.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

/// Doubles use 17 significant digits so every value round-trips.
std::string format_double(double v);

void write_csv(const Table& table, std::ostream& os);

/// {"col": [...], ...} in column order; NaN/Inf become null.
nlohmann::ordered_json columns_json(const Table& table);

}  // namespace chiralrbm
