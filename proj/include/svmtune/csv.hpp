#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "svmtune/dataset.hpp"
#include "svmtune/error.hpp"

// Comma-separated input with "." decimal point and an optional header row.
// A first row whose cells are all non-numeric text counts as a header when
// the following row contains at least one numeric cell.

namespace svmtune {

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(current);
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  fields.push_back(current);
  return fields;
}

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("E_IO", "cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

}  // namespace detail

inline RawTable parse_csv(const std::string& path,
                          std::size_t label_column = kLastColumn) {
  const std::vector<std::string> lines = detail::read_lines(path);

  std::vector<std::vector<Cell>> rows;
  for (const std::string& line : lines) {
    if (trim(line).empty()) continue;
    std::vector<Cell> row;
    for (const std::string& field : detail::split_fields(line))
      row.push_back(make_cell(field));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail("E_PARSE", "no data rows in " + path);

  const std::size_t width = rows.front().size();
  for (const auto& row : rows)
    if (row.size() != width) fail("E_PARSE", "ragged rows in " + path);

  RawTable table;
  bool header = false;
  if (rows.size() >= 2) {
    bool all_text = true;
    for (const Cell& c : rows.front())
      if (c.kind != Cell::Kind::Text) {
        all_text = false;
        break;
      }
    bool next_numeric = false;
    for (const Cell& c : rows[1])
      if (c.kind == Cell::Kind::Numeric) {
        next_numeric = true;
        break;
      }
    header = all_text && next_numeric;
  }

  if (header) {
    for (const Cell& c : rows.front()) table.column_names.push_back(c.token);
    rows.erase(rows.begin());
  } else {
    for (std::size_t j = 0; j < width; ++j) {
      std::ostringstream name;
      name << "c" << j;
      table.column_names.push_back(name.str());
    }
  }

  table.label_column = label_column == kLastColumn ? width - 1 : label_column;
  if (table.label_column >= width)
    fail("E_INVALID", "label column out of range");
  table.rows = std::move(rows);
  return table;
}

}  // namespace svmtune
