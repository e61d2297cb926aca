#ifndef ITEMDEV_DATASET_HPP
#define ITEMDEV_DATASET_HPP

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "itemdev/sample.hpp"

namespace itemdev {

enum class MissingPolicy { DropCell, FailOnMissing };

/// Respondent-by-item responses on one common scale.
struct Dataset {
  std::vector<ItemSample> items;
  std::size_t respondent_count = 0;
  std::string source_path;
  std::size_t dropped_cells = 0;
  ScaleSpec scale{0.0, 1.0};

  const ItemSample* find(std::string_view id) const {
    for (const auto& item : items)
      if (item.id() == id) return &item;
    return nullptr;
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Splits one CSV record. Double quotes may wrap a field; "" inside quotes is
// a literal quote.
inline std::vector<std::string> split_csv_record(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  if (quoted) throw DataError("line " + std::to_string(line_no) + ": unterminated quoted field");
  fields.push_back(std::move(field));
  return fields;
}

inline std::string format_plain(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace detail

/// Parses CSV text: a header row of item ids, then one respondent per row.
/// Empty cells and "NA" are missing; DropCell removes the cell from that
/// item only.
inline Dataset parse_csv(std::istream& in, const ScaleSpec& scale, MissingPolicy policy,
                         std::string source_path = "<stream>") {
  Dataset ds;
  ds.scale = scale;
  ds.source_path = std::move(source_path);

  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> ids;
  while (ids.empty() && std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (detail::trim(line).empty()) continue;
    std::set<std::string> seen;
    for (auto& raw : detail::split_csv_record(line, line_no)) {
      std::string id(detail::trim(raw));
      if (id.empty()) throw DataError("line " + std::to_string(line_no) + ": empty item id in header");
      if (!seen.insert(id).second) throw DataError("duplicate header '" + id + "'");
      ids.push_back(std::move(id));
    }
  }
  if (ids.empty()) throw DataError("no header row in " + ds.source_path);

  std::vector<std::vector<double>> columns(ids.size());
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    ++ds.respondent_count;
    const auto cells = detail::split_csv_record(line, line_no);
    if (cells.size() != ids.size())
      throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(ids.size()) +
                      " cells, found " + std::to_string(cells.size()));
    for (std::size_t col = 0; col < cells.size(); ++col) {
      const std::string_view cell = detail::trim(cells[col]);
      const std::string where = "line " + std::to_string(line_no) + ", column '" + ids[col] + "'";
      if (cell.empty() || cell == "NA") {
        if (policy == MissingPolicy::FailOnMissing) throw DataError(where + ": missing value");
        ++ds.dropped_cells;
        continue;
      }
      double value = 0.0;
      const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (ec != std::errc{} || end != cell.data() + cell.size() || !std::isfinite(value))
        throw DataError(where + ": malformed numeric cell '" + std::string(cell) + "'");
      if (!scale.contains(value))
        throw DataError(where + ": value " + detail::format_plain(value) + " outside scale [" +
                        detail::format_plain(scale.min()) + ", " + detail::format_plain(scale.max()) + "]");
      columns[col].push_back(value);
    }
  }

  ds.items.reserve(ids.size());
  for (std::size_t col = 0; col < ids.size(); ++col) {
    if (columns[col].empty()) throw DataError("item '" + ids[col] + "': empty sample");
    ds.items.emplace_back(ids[col], std::move(columns[col]), scale);
  }
  return ds;
}

inline Dataset ingest_csv(const std::string& path, double scale_min, double scale_max, MissingPolicy policy) {
  const ScaleSpec scale(scale_min, scale_max);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  return parse_csv(in, scale, policy, path);
}

}  // namespace itemdev

#endif  // ITEMDEV_DATASET_HPP
