#pragma once

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "svmtune/error.hpp"
#include "svmtune/matrix.hpp"

// Tabular data as parsed from disk (RawTable) and the cleaned numeric form
// used everywhere else (Dataset). Cleaning drops rows with missing values,
// integer-codes categorical feature columns and removes zero-variance
// columns.

namespace svmtune {

struct Cell {
  enum class Kind { Numeric, Text, Missing };
  Kind kind = Kind::Missing;
  double number = 0.0;
  std::string token;  // trimmed raw text, kept for categorical coding
};

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline bool is_missing_token(const std::string& token) {
  if (token.empty() || token == "?") return true;
  auto equals_ci = [&](const char* ref) {
    if (token.size() != std::string_view(ref).size()) return false;
    for (std::size_t i = 0; i < token.size(); ++i)
      if (std::tolower(static_cast<unsigned char>(token[i])) != ref[i])
        return false;
    return true;
  };
  return equals_ci("na") || equals_ci("<null>");
}

// Interprets one raw field: missing marker, number, or categorical text.
inline Cell make_cell(std::string_view raw) {
  Cell cell;
  cell.token = trim(raw);
  if (is_missing_token(cell.token)) {
    cell.kind = Cell::Kind::Missing;
    return cell;
  }
  const char* begin = cell.token.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end != begin && *end == '\0') {
    cell.kind = Cell::Kind::Numeric;
    cell.number = value;
  } else {
    cell.kind = Cell::Kind::Text;
  }
  return cell;
}

struct RawTable {
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> column_names;
  std::size_t label_column = 0;

  std::size_t n_columns() const { return column_names.size(); }
};

// Marker for "use the last column as the label".
inline constexpr std::size_t kLastColumn = std::numeric_limits<std::size_t>::max();

struct Dataset {
  Matrix features;
  std::vector<int> labels;
  std::vector<std::string> class_names;
  std::string name;

  std::size_t n_examples() const { return features.rows(); }
  std::size_t n_features() const { return features.cols(); }
  int n_classes() const { return static_cast<int>(class_names.size()); }
};

namespace detail {

inline bool column_is_constant(const std::vector<std::vector<double>>& rows,
                               std::size_t j) {
  double lo = rows.front()[j], hi = rows.front()[j];
  for (const auto& r : rows) {
    lo = std::min(lo, r[j]);
    hi = std::max(hi, r[j]);
  }
  return lo == hi;
}

}  // namespace detail

inline Dataset clean(const RawTable& table, std::string name = "") {
  if (table.n_columns() < 2)
    fail("E_PARSE", "table needs a label column and at least one feature");
  if (table.label_column >= table.n_columns())
    fail("E_INVALID", "label column out of range");

  // Rows containing any missing marker are dropped.
  std::vector<const std::vector<Cell>*> kept;
  for (const auto& row : table.rows) {
    bool missing = false;
    for (const Cell& c : row)
      if (c.kind == Cell::Kind::Missing) {
        missing = true;
        break;
      }
    if (!missing) kept.push_back(&row);
  }
  if (kept.empty()) fail("E_DEGENERATE", "all rows contain missing values");

  std::vector<std::size_t> feature_cols;
  for (std::size_t j = 0; j < table.n_columns(); ++j)
    if (j != table.label_column) feature_cols.push_back(j);

  // Categorical columns (any text cell) are integer-coded by first
  // appearance; numeric columns keep their values.
  std::vector<std::vector<double>> values(kept.size(),
                                          std::vector<double>(feature_cols.size()));
  for (std::size_t f = 0; f < feature_cols.size(); ++f) {
    const std::size_t j = feature_cols[f];
    bool categorical = false;
    for (const auto* row : kept)
      if ((*row)[j].kind == Cell::Kind::Text) {
        categorical = true;
        break;
      }
    if (categorical) {
      std::vector<std::string> seen;
      for (std::size_t i = 0; i < kept.size(); ++i) {
        const std::string& token = (*kept[i])[j].token;
        std::size_t code = seen.size();
        for (std::size_t s = 0; s < seen.size(); ++s)
          if (seen[s] == token) {
            code = s;
            break;
          }
        if (code == seen.size()) seen.push_back(token);
        values[i][f] = static_cast<double>(code);
      }
    } else {
      for (std::size_t i = 0; i < kept.size(); ++i)
        values[i][f] = (*kept[i])[j].number;
    }
  }

  // Zero-variance feature columns (constant over the kept rows) are removed.
  std::vector<std::size_t> live;
  for (std::size_t f = 0; f < feature_cols.size(); ++f)
    if (!detail::column_is_constant(values, f)) live.push_back(f);
  if (live.empty()) fail("E_DEGENERATE", "no feature column with variance left");

  Dataset ds;
  ds.name = std::move(name);
  ds.features = Matrix(kept.size(), live.size());
  for (std::size_t i = 0; i < kept.size(); ++i)
    for (std::size_t f = 0; f < live.size(); ++f)
      ds.features(i, f) = values[i][live[f]];

  // Labels become class indices ordered by first appearance.
  ds.labels.reserve(kept.size());
  for (const auto* row : kept) {
    const std::string& token = (*row)[table.label_column].token;
    int cls = -1;
    for (std::size_t s = 0; s < ds.class_names.size(); ++s)
      if (ds.class_names[s] == token) {
        cls = static_cast<int>(s);
        break;
      }
    if (cls < 0) {
      cls = static_cast<int>(ds.class_names.size());
      ds.class_names.push_back(token);
    }
    ds.labels.push_back(cls);
  }
  if (ds.class_names.size() < 2)
    fail("E_DEGENERATE", "fewer than two classes remain after cleaning");
  return ds;
}

inline std::vector<std::size_t> class_counts(const Dataset& ds) {
  std::vector<std::size_t> counts(ds.class_names.size(), 0);
  for (int label : ds.labels) ++counts[static_cast<std::size_t>(label)];
  return counts;
}

// Accuracy (in percent) of always predicting the most frequent class.
inline double zero_rule_accuracy(const Dataset& ds) {
  std::size_t best = 0;
  for (std::size_t c : class_counts(ds)) best = std::max(best, c);
  return 100.0 * static_cast<double>(best) /
         static_cast<double>(ds.n_examples());
}

}  // namespace svmtune
