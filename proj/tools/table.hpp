#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace catamp_cli {

/// Empty cell (serialized as an empty CSV field / JSON null).
struct Null {};

using Cell = std::variant<Null, std::int64_t, double, std::string>;

/// Column-ordered result table with a fixed header.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

/// Doubles use %.17g, so files are byte-stable across runs.
std::string format_double(double value);
std::string to_csv(const Table& table);
nlohmann::ordered_json to_json(const Table& table);

}  // namespace catamp_cli
