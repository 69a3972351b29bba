#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "svmtune/error.hpp"

// One-sided Mann-Whitney-Wilcoxon rank-sum test. Small samples (both sizes
// <= 12) get an exact p-value over all label assignments of the pooled,
// midranked values; larger samples use the normal approximation with tie
// correction and a 0.5 continuity correction.
//
// Direction Greater tests the alternative "sample_a tends to be greater
// than sample_b"; by symmetry Greater on (a, b) equals Less on (b, a).

namespace svmtune {

enum class Direction { Greater, Less };

struct MwwResult {
  double u_statistic = 0.0;  // U of sample_a, midranked
  double p_value = 1.0;
  Direction direction = Direction::Greater;
  bool significant = false;  // p < 0.05
};

inline constexpr double kMwwAlpha = 0.05;
inline constexpr std::size_t kMwwExactLimit = 12;

namespace detail {

// Midranks of the pooled sample, doubled so that every rank is integral
// (ties average two ranks, so doubling clears the halves).
inline std::vector<std::int64_t> doubled_midranks(std::vector<double> pooled,
                                                  std::vector<std::size_t>& order) {
  const std::size_t n = pooled.size();
  order.resize(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return pooled[a] < pooled[b]; });
  std::vector<std::int64_t> ranks(n, 0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    // ranks i+1 .. j+1 tie; midrank doubled = (i + j + 2)
    const std::int64_t doubled = static_cast<std::int64_t>(i + j + 2);
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = doubled;
    i = j + 1;
  }
  return ranks;
}

// U statistic of sample a (doubled scale: 2 * U).
inline std::int64_t doubled_u(std::span<const std::int64_t> doubled_ranks,
                              std::size_t n_a) {
  std::int64_t rank_sum = 0;
  for (std::size_t i = 0; i < n_a; ++i) rank_sum += doubled_ranks[i];
  return rank_sum - static_cast<std::int64_t>(n_a) *
                        static_cast<std::int64_t>(n_a + 1);
}

// Counts, for every achievable doubled rank sum, the number of ways to
// choose n_a of the pooled items with that sum (subset-sum counting over
// the full assignment enumeration).
inline std::vector<std::vector<std::int64_t>> rank_sum_counts(
    std::span<const std::int64_t> doubled_ranks, std::size_t n_a) {
  std::int64_t max_sum = 0;
  std::vector<std::int64_t> sorted(doubled_ranks.begin(), doubled_ranks.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = sorted.size() - n_a; i < sorted.size(); ++i)
    max_sum += sorted[i];
  std::vector<std::vector<std::int64_t>> ways(
      n_a + 1, std::vector<std::int64_t>(max_sum + 1, 0));
  ways[0][0] = 1;
  for (std::int64_t rank : doubled_ranks)
    for (std::size_t chosen = n_a; chosen >= 1; --chosen)
      for (std::int64_t s = max_sum; s >= rank; --s)
        if (ways[chosen - 1][s - rank] != 0)
          ways[chosen][s] += ways[chosen - 1][s - rank];
  return ways;
}

inline double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace detail

// Exact one-sided p-value by enumerating all assignments of the pooled
// midranked values to the two groups.
inline double mww_exact_p(std::span<const double> sample_a,
                          std::span<const double> sample_b,
                          Direction direction) {
  if (sample_a.empty() || sample_b.empty()) fail("E_INVALID", "empty sample");
  std::vector<double> pooled(sample_a.begin(), sample_a.end());
  pooled.insert(pooled.end(), sample_b.begin(), sample_b.end());
  std::vector<std::size_t> order;
  const std::vector<std::int64_t> ranks = detail::doubled_midranks(pooled, order);
  const std::size_t n_a = sample_a.size();
  const std::int64_t observed_rank_sum_offset =
      static_cast<std::int64_t>(n_a) * static_cast<std::int64_t>(n_a + 1);
  const std::int64_t observed = detail::doubled_u(ranks, n_a) +
                                observed_rank_sum_offset;

  const auto ways = detail::rank_sum_counts(ranks, n_a);
  const auto& row = ways[n_a];
  std::int64_t total = 0, extreme = 0;
  for (std::int64_t s = 0; s < static_cast<std::int64_t>(row.size()); ++s) {
    if (row[s] == 0) continue;
    total += row[s];
    if (direction == Direction::Greater ? s >= observed : s <= observed)
      extreme += row[s];
  }
  return static_cast<double>(extreme) / static_cast<double>(total);
}

// Normal approximation with tie-corrected variance and 0.5 continuity
// correction.
inline double mww_normal_p(std::span<const double> sample_a,
                           std::span<const double> sample_b,
                           Direction direction) {
  if (sample_a.empty() || sample_b.empty()) fail("E_INVALID", "empty sample");
  std::vector<double> pooled(sample_a.begin(), sample_a.end());
  pooled.insert(pooled.end(), sample_b.begin(), sample_b.end());
  std::vector<std::size_t> order;
  const std::vector<std::int64_t> ranks = detail::doubled_midranks(pooled, order);
  const double n1 = static_cast<double>(sample_a.size());
  const double n2 = static_cast<double>(sample_b.size());
  const double n = n1 + n2;
  const double u = static_cast<double>(detail::doubled_u(ranks, sample_a.size())) / 2.0;

  // Tie term: sum over tie groups of t^3 - t.
  double tie_sum = 0.0;
  {
    std::vector<double> sorted(pooled);
    std::sort(sorted.begin(), sorted.end());
    std::size_t i = 0;
    while (i < sorted.size()) {
      std::size_t j = i;
      while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
      const double t = static_cast<double>(j - i + 1);
      tie_sum += t * t * t - t;
      i = j + 1;
    }
  }
  const double mean = n1 * n2 / 2.0;
  const double variance =
      n1 * n2 / 12.0 * ((n + 1.0) - tie_sum / (n * (n - 1.0)));
  if (variance <= 0.0) return 1.0;  // all values tie: no evidence either way
  const double sd = std::sqrt(variance);
  if (direction == Direction::Greater)
    return detail::normal_sf((u - mean - 0.5) / sd);
  return 1.0 - detail::normal_sf((u - mean + 0.5) / sd);
}

inline MwwResult mww_one_sided(std::span<const double> sample_a,
                               std::span<const double> sample_b,
                               Direction direction) {
  if (sample_a.empty() || sample_b.empty()) fail("E_INVALID", "empty sample");
  MwwResult result;
  result.direction = direction;
  {
    std::vector<double> pooled(sample_a.begin(), sample_a.end());
    pooled.insert(pooled.end(), sample_b.begin(), sample_b.end());
    std::vector<std::size_t> order;
    const auto ranks = detail::doubled_midranks(pooled, order);
    result.u_statistic =
        static_cast<double>(detail::doubled_u(ranks, sample_a.size())) / 2.0;
  }
  const bool exact = sample_a.size() <= kMwwExactLimit &&
                     sample_b.size() <= kMwwExactLimit;
  result.p_value = exact ? mww_exact_p(sample_a, sample_b, direction)
                         : mww_normal_p(sample_a, sample_b, direction);
  result.significant = result.p_value < kMwwAlpha;
  return result;
}

}  // namespace svmtune
