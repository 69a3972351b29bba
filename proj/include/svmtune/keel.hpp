#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "svmtune/csv.hpp"
#include "svmtune/dataset.hpp"
#include "svmtune/error.hpp"

// Reader for the KEEL repository's .dat layout: an @relation/@attribute/
// @inputs/@outputs header followed by comma-separated rows after @data.

namespace svmtune {

namespace detail {

inline bool starts_with_ci(const std::string& line, std::string_view keyword) {
  if (line.size() < keyword.size()) return false;
  for (std::size_t i = 0; i < keyword.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(line[i])) != keyword[i])
      return false;
  return true;
}

// "@attribute Name real [a, b]" or "@attribute Class {x, y}" -> "Name".
inline std::string attribute_name(const std::string& line) {
  std::string rest = trim(line.substr(std::string_view("@attribute").size()));
  std::size_t end = 0;
  while (end < rest.size() &&
         !std::isspace(static_cast<unsigned char>(rest[end])) &&
         rest[end] != '{' && rest[end] != '[')
    ++end;
  return rest.substr(0, end);
}

}  // namespace detail

inline RawTable parse_keel(const std::string& path) {
  const std::vector<std::string> lines = detail::read_lines(path);

  std::vector<std::string> attributes;
  std::vector<std::string> outputs;
  std::size_t data_start = lines.size();
  bool has_data_marker = false;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string line = trim(lines[i]);
    if (line.empty()) continue;
    if (detail::starts_with_ci(line, "@attribute")) {
      attributes.push_back(detail::attribute_name(line));
    } else if (detail::starts_with_ci(line, "@outputs")) {
      std::string rest = trim(line.substr(std::string_view("@outputs").size()));
      for (const std::string& field : detail::split_fields(rest)) {
        const std::string name = trim(field);
        if (!name.empty()) outputs.push_back(name);
      }
    } else if (detail::starts_with_ci(line, "@data")) {
      has_data_marker = true;
      data_start = i + 1;
      break;
    }
    // @relation and @inputs carry no information we need.
  }

  if (!has_data_marker) fail("E_PARSE", "missing @data section in " + path);
  if (attributes.empty()) fail("E_PARSE", "no @attribute declarations in " + path);

  RawTable table;
  table.column_names = attributes;

  if (outputs.empty()) {
    table.label_column = attributes.size() - 1;  // KEEL convention
  } else {
    if (outputs.size() != 1)
      fail("E_PARSE", "expected a single output attribute in " + path);
    std::size_t found = attributes.size();
    for (std::size_t j = 0; j < attributes.size(); ++j)
      if (attributes[j] == outputs.front()) found = j;
    if (found == attributes.size())
      fail("E_PARSE", "output attribute not declared: " + outputs.front());
    table.label_column = found;
  }

  for (std::size_t i = data_start; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    std::vector<Cell> row;
    for (const std::string& field : detail::split_fields(lines[i]))
      row.push_back(make_cell(field));
    if (row.size() != attributes.size())
      fail("E_PARSE", "data row width does not match attributes in " + path);
    table.rows.push_back(std::move(row));
  }
  if (table.rows.empty()) fail("E_PARSE", "no data rows in " + path);
  return table;
}

}  // namespace svmtune
