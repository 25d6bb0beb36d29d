#include "tlstat/cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "tlstat/error.hpp"

namespace tlstat::cli {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size()) throw ShapeError("CSV row width does not match header");
  rows_.push_back(std::move(cells));
}

void CsvTable::write(const std::filesystem::path& path, const nlohmann::json& metadata) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << "# " << metadata.dump() << '\n';
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(columns_);
  for (const auto& r : rows_) line(r);
  if (!out) throw ConfigError("failed while writing " + path.string());
}

}  // namespace tlstat::cli
