#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "svmtune/error.hpp"
#include "svmtune/matrix.hpp"
#include "svmtune/rng.hpp"

// Euclidean geometry helpers and the Gaussian RBF kernel
// K(x, y) = exp(-gamma * ||x - y||^2).

namespace svmtune {

inline double squared_euclidean(std::span<const double> x,
                                std::span<const double> y) {
  if (x.size() != y.size()) fail("E_INVALID", "vector length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    sum += d * d;
  }
  return sum;
}

inline double euclidean(std::span<const double> x, std::span<const double> y) {
  return std::sqrt(squared_euclidean(x, y));
}

inline double rbf_kernel(std::span<const double> x, std::span<const double> y,
                         double gamma) {
  if (!(gamma > 0.0)) fail("E_INVALID", "gamma must be positive");
  return std::exp(-gamma * squared_euclidean(x, y));
}

inline Matrix kernel_matrix(const Matrix& a, const Matrix& b, double gamma) {
  if (a.cols() != b.cols()) fail("E_INVALID", "feature count mismatch");
  if (!(gamma > 0.0)) fail("E_INVALID", "gamma must be positive");
  Matrix k(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j)
      k(i, j) = std::exp(-gamma * squared_euclidean(a.row(i), b.row(j)));
  return k;
}

// Euclidean distances over unordered example pairs; either the full set or a
// uniform without-replacement sample of pair_budget pairs.
struct DistanceSample {
  std::vector<double> values;
  bool exhaustive = false;
  std::size_t pair_budget = 0;
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kDefaultPairBudget = 1000;

// Maps t in [0, m(m-1)/2) to the t-th unordered pair (i, j), i < j, in the
// enumeration (0,1), (0,2), ..., (0,m-1), (1,2), ...
inline std::pair<std::size_t, std::size_t> unrank_pair(std::uint64_t t,
                                                       std::size_t m) {
  // pairs_before(i) = i*(2m - i - 1)/2; invert approximately, then correct.
  auto pairs_before = [m](std::uint64_t i) {
    return i * (2 * static_cast<std::uint64_t>(m) - i - 1) / 2;
  };
  const double md = static_cast<double>(m);
  double guess = md - 0.5 - std::sqrt((md - 0.5) * (md - 0.5) -
                                      2.0 * static_cast<double>(t));
  std::uint64_t i = guess <= 0.0 ? 0 : static_cast<std::uint64_t>(guess);
  if (i >= m - 1) i = m - 2;
  while (pairs_before(i + 1) <= t) ++i;
  while (pairs_before(i) > t) --i;
  const std::uint64_t j = t - pairs_before(i) + i + 1;
  return {static_cast<std::size_t>(i), static_cast<std::size_t>(j)};
}

inline DistanceSample pairwise_distances(const Matrix& features,
                                         std::size_t pair_budget,
                                         std::uint64_t seed) {
  const std::size_t m = features.rows();
  if (m < 2) fail("E_INVALID", "need at least two examples");
  if (pair_budget < 1) fail("E_INVALID", "pair_budget must be >= 1");

  const std::uint64_t total =
      static_cast<std::uint64_t>(m) * (m - 1) / 2;
  DistanceSample sample;
  sample.pair_budget = pair_budget;
  sample.seed = seed;

  if (total <= pair_budget) {
    sample.exhaustive = true;
    sample.values.reserve(total);
    for (std::size_t i = 0; i + 1 < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        sample.values.push_back(euclidean(features.row(i), features.row(j)));
    return sample;
  }

  sample.exhaustive = false;
  Rng rng(seed);
  const std::vector<std::uint64_t> picks = rng.sample_indices(total, pair_budget);
  sample.values.reserve(pair_budget);
  for (std::uint64_t t : picks) {
    const auto [i, j] = unrank_pair(t, m);
    sample.values.push_back(euclidean(features.row(i), features.row(j)));
  }
  return sample;
}

// Type-7 quantile: with h = (n-1)*q, linearly interpolates between the
// order statistics at floor(h) and ceil(h).
inline double quantile(std::vector<double> values, double q) {
  if (values.empty()) fail("E_INVALID", "quantile of empty sequence");
  if (!(q >= 0.0 && q <= 1.0)) fail("E_INVALID", "q must be in [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = static_cast<double>(values.size() - 1) * q;
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

}  // namespace svmtune
