#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "svmtune/cross_validation.hpp"
#include "svmtune/error.hpp"
#include "svmtune/mww.hpp"

// Method-vs-reference significance report plus CSV and Markdown output.
// Scores are written in fixed notation with six significant digits; summary
// tables round to one decimal like the result tables they mirror.

namespace svmtune {

// Fixed (never scientific) notation with the given significant digits,
// trailing zeros trimmed.
inline std::string format_sig(double value, int significant = 6) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  const double magnitude = std::abs(value);
  const int exponent = static_cast<int>(std::floor(std::log10(magnitude)));
  const int decimals = std::max(0, significant - 1 - exponent);
  char buffer[512];
  std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
  std::string out(buffer);
  if (out.find('.') != std::string::npos) {
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
  }
  return out;
}

inline std::string format_fixed(double value, int decimals) {
  char buffer[128];
  std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
  std::string out(buffer);
  if (out.find_first_not_of("-.0") == std::string::npos && out.front() == '-')
    out.erase(0, 1);  // avoid "-0.0"
  return out;
}

enum class Verdict { HigherSignificant, NotSignificant, LowerSignificant };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::HigherSignificant: return "higher_significant";
    case Verdict::NotSignificant: return "not_significant";
    case Verdict::LowerSignificant: return "lower_significant";
  }
  fail("E_INVALID", "unknown verdict");
}

struct MethodComparison {
  std::string method;
  double mean_oa_diff = 0.0;
  double mean_aa_diff = 0.0;
  MwwResult oa_greater, oa_less, aa_greater, aa_less;
  Verdict oa_verdict = Verdict::NotSignificant;
  Verdict aa_verdict = Verdict::NotSignificant;
};

struct ExperimentReport {
  std::string dataset;
  std::string scenario;  // "supervised" or "semi_supervised"
  std::string reference;
  std::vector<std::pair<std::string, RunScores>> methods;
  std::vector<MethodComparison> comparisons;  // every non-reference method
};

// Runs the one-sided test in both directions on the per-repetition scores of
// every method against the reference and classifies the three-way verdict.
inline ExperimentReport compare_methods(
    std::string dataset, std::string scenario,
    std::vector<std::pair<std::string, RunScores>> methods,
    const std::string& reference) {
  const RunScores* ref = nullptr;
  for (const auto& [name, scores] : methods)
    if (name == reference) ref = &scores;
  if (!ref) fail("E_INVALID", "reference method not present: " + reference);
  for (const auto& [name, scores] : methods)
    if (scores.per_repetition_oa.size() != ref->per_repetition_oa.size())
      fail("E_INVALID", "mismatched repetition counts for " + name);

  ExperimentReport report;
  report.dataset = std::move(dataset);
  report.scenario = std::move(scenario);
  report.reference = reference;

  auto classify = [](const MwwResult& greater, const MwwResult& less) {
    if (greater.significant) return Verdict::HigherSignificant;
    if (less.significant) return Verdict::LowerSignificant;
    return Verdict::NotSignificant;
  };

  for (const auto& [name, scores] : methods) {
    if (name == reference) continue;
    MethodComparison cmp;
    cmp.method = name;
    cmp.mean_oa_diff = scores.mean_oa - ref->mean_oa;
    cmp.mean_aa_diff = scores.mean_aa - ref->mean_aa;
    cmp.oa_greater = mww_one_sided(scores.per_repetition_oa,
                                   ref->per_repetition_oa, Direction::Greater);
    cmp.oa_less = mww_one_sided(scores.per_repetition_oa,
                                ref->per_repetition_oa, Direction::Less);
    cmp.aa_greater = mww_one_sided(scores.per_repetition_aa,
                                   ref->per_repetition_aa, Direction::Greater);
    cmp.aa_less = mww_one_sided(scores.per_repetition_aa,
                                ref->per_repetition_aa, Direction::Less);
    cmp.oa_verdict = classify(cmp.oa_greater, cmp.oa_less);
    cmp.aa_verdict = classify(cmp.aa_greater, cmp.aa_less);
    report.comparisons.push_back(std::move(cmp));
  }
  report.methods = std::move(methods);
  return report;
}

// ---- CSV ----

inline constexpr const char* kScoresCsvHeader =
    "dataset,scenario,method,repetition,oa,aa";

inline void write_scores_csv(std::ostream& out, const ExperimentReport& report) {
  for (const auto& [name, scores] : report.methods)
    for (std::size_t r = 0; r < scores.per_repetition_oa.size(); ++r)
      out << report.dataset << ',' << report.scenario << ',' << name << ','
          << (r + 1) << ',' << format_sig(scores.per_repetition_oa[r]) << ','
          << format_sig(scores.per_repetition_aa[r]) << '\n';
}

struct ScoreRow {
  std::string dataset, scenario, method;
  int repetition = 0;
  double oa = 0.0, aa = 0.0;
};

inline std::vector<ScoreRow> read_scores_csv(std::istream& in) {
  std::vector<ScoreRow> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line == kScoresCsvHeader) continue;
    }
    std::istringstream ss(line);
    ScoreRow row;
    std::string field;
    std::getline(ss, row.dataset, ',');
    std::getline(ss, row.scenario, ',');
    std::getline(ss, row.method, ',');
    std::getline(ss, field, ',');
    row.repetition = std::stoi(field);
    std::getline(ss, field, ',');
    row.oa = std::stod(field);
    std::getline(ss, field, ',');
    row.aa = std::stod(field);
    rows.push_back(std::move(row));
  }
  return rows;
}

// Rebuilds per-method RunScores (means recomputed from the parsed values).
inline std::map<std::string, RunScores> scores_from_rows(
    const std::vector<ScoreRow>& rows) {
  std::map<std::string, RunScores> out;
  for (const ScoreRow& row : rows) {
    RunScores& scores = out[row.method];
    scores.per_repetition_oa.push_back(row.oa);
    scores.per_repetition_aa.push_back(row.aa);
  }
  for (auto& [name, scores] : out) {
    scores.mean_oa = detail::mean_of(scores.per_repetition_oa);
    scores.mean_aa = detail::mean_of(scores.per_repetition_aa);
  }
  return out;
}

// ---- Markdown ----

namespace detail {

inline void markdown_tables(std::ostream& out,
                            const std::vector<ExperimentReport>& reports,
                            bool use_aa) {
  const char* metric = use_aa ? "AA" : "OA";

  // Column order: reference first, then methods in first-seen order.
  std::vector<std::string> columns;
  auto add_column = [&](const std::string& name) {
    for (const std::string& c : columns)
      if (c == name) return;
    columns.push_back(name);
  };
  for (const ExperimentReport& report : reports) {
    add_column(report.reference);
    for (const auto& [name, scores] : report.methods) add_column(name);
  }

  auto find_scores = [](const ExperimentReport& report,
                        const std::string& name) -> const RunScores* {
    for (const auto& [n, s] : report.methods)
      if (n == name) return &s;
    return nullptr;
  };
  auto find_comparison = [](const ExperimentReport& report,
                            const std::string& name) -> const MethodComparison* {
    for (const MethodComparison& c : report.comparisons)
      if (c.method == name) return &c;
    return nullptr;
  };

  out << "### Mean " << metric << " (%)\n\n";
  out << "| dataset |";
  for (const std::string& c : columns) out << ' ' << c << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < columns.size(); ++i) out << "---|";
  out << '\n';
  for (const ExperimentReport& report : reports) {
    out << "| " << report.dataset << " |";
    for (const std::string& c : columns) {
      const RunScores* scores = find_scores(report, c);
      if (!scores) {
        out << " |";
        continue;
      }
      const double mean = use_aa ? scores->mean_aa : scores->mean_oa;
      const MethodComparison* cmp = find_comparison(report, c);
      const bool bold =
          cmp && (use_aa ? cmp->aa_verdict : cmp->oa_verdict) ==
                     Verdict::HigherSignificant;
      out << ' ' << (bold ? "**" : "") << format_fixed(mean, 1)
          << (bold ? "**" : "") << " |";
    }
    out << '\n';
  }
  out << '\n';

  out << "### " << metric << " difference to reference\n\n";
  out << "| dataset |";
  for (const std::string& c : columns) out << ' ' << c << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < columns.size(); ++i) out << "---|";
  out << '\n';
  for (const ExperimentReport& report : reports) {
    out << "| " << report.dataset << " |";
    for (const std::string& c : columns) {
      if (c == report.reference) {
        out << " ref |";
        continue;
      }
      const MethodComparison* cmp = find_comparison(report, c);
      if (!cmp) {
        out << " |";
        continue;
      }
      const double diff = use_aa ? cmp->mean_aa_diff : cmp->mean_oa_diff;
      const bool bold = (use_aa ? cmp->aa_verdict : cmp->oa_verdict) !=
                        Verdict::NotSignificant;
      out << ' ' << (bold ? "**" : "") << format_fixed(diff, 1)
          << (bold ? "**" : "") << " |";
    }
    out << '\n';
  }
  out << '\n';
}

}  // namespace detail

inline std::string markdown_summary(const std::vector<ExperimentReport>& reports) {
  std::ostringstream out;
  out << "# Experiment summary\n\n";

  std::vector<std::string> scenarios;
  for (const ExperimentReport& report : reports) {
    bool seen = false;
    for (const std::string& s : scenarios) seen = seen || s == report.scenario;
    if (!seen) scenarios.push_back(report.scenario);
  }
  for (const std::string& scenario : scenarios) {
    std::vector<ExperimentReport> group;
    for (const ExperimentReport& report : reports)
      if (report.scenario == scenario) group.push_back(report);
    out << "## Scenario: " << scenario << "\n\n";
    out << "Reference method: " << group.front().reference
        << ". Bold cells differ significantly from the reference "
           "(one-sided Mann-Whitney-Wilcoxon, p < 0.05).\n\n";
    detail::markdown_tables(out, group, false);
    detail::markdown_tables(out, group, true);
  }
  return out.str();
}

// Writes the file in one shot: content lands under a temporary name first
// and is renamed into place.
inline void write_text_atomic(const std::string& path,
                              const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail("E_IO", "cannot write " + tmp);
    out << content;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    fail("E_IO", "cannot move " + tmp + " to " + path);
}

}  // namespace svmtune
