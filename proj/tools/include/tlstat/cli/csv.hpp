#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace tlstat::cli {

// Shortest form that round-trips at 17 significant digits; "inf"/"-inf"/"nan".
std::string format_number(double v);
template <std::integral T>
std::string format_number(T v) {
  return std::to_string(v);
}

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_row(std::vector<std::string> cells);
  std::size_t size() const { return rows_.size(); }

  // First line is "# " + metadata as compact JSON, then the header and rows.
  void write(const std::filesystem::path& path, const nlohmann::json& metadata) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace tlstat::cli
