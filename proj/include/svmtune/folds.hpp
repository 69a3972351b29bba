#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "svmtune/error.hpp"
#include "svmtune/rng.hpp"

// Stratified fold assignment and labelled subsampling. Both shuffle within
// each class with a seeded generator, so identical inputs and seeds always
// reproduce the same split.

namespace svmtune {

struct FoldPlan {
  int k = 0;
  std::vector<int> assignments;  // fold index per example
  std::uint64_t seed = 0;

  std::vector<std::size_t> fold_indices(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i)
      if (assignments[i] == fold) out.push_back(i);
    return out;
  }
  std::vector<std::size_t> complement_indices(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i)
      if (assignments[i] != fold) out.push_back(i);
    return out;
  }
};

namespace detail {

// Distinct label values in ascending order.
inline std::vector<int> distinct_labels(std::span<const int> labels) {
  std::vector<int> classes(labels.begin(), labels.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  return classes;
}

inline std::vector<std::vector<std::size_t>> members_by_class(
    std::span<const int> labels, const std::vector<int>& classes) {
  std::vector<std::vector<std::size_t>> members(classes.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t c = 0; c < classes.size(); ++c)
      if (classes[c] == labels[i]) {
        members[c].push_back(i);
        break;
      }
  }
  return members;
}

}  // namespace detail

inline FoldPlan stratified_kfold(std::span<const int> labels, int k,
                                 std::uint64_t seed) {
  if (k < 1) fail("E_INVALID", "fold count must be >= 1");
  if (labels.empty()) fail("E_INVALID", "no labels");

  const std::vector<int> classes = detail::distinct_labels(labels);
  auto members = detail::members_by_class(labels, classes);

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignments.assign(labels.size(), -1);

  Rng rng(seed);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (members[c].size() < static_cast<std::size_t>(k))
      fail("E_INVALID", "class " + std::to_string(classes[c]) + " has " +
                            std::to_string(members[c].size()) +
                            " members; need at least " + std::to_string(k));
    rng.shuffle(members[c]);
    for (std::size_t t = 0; t < members[c].size(); ++t)
      plan.assignments[members[c][t]] = static_cast<int>(t % k);
  }
  return plan;
}

struct LabeledSubset {
  std::vector<std::size_t> labeled_indices;  // ascending
  double fraction = 1.0;
  int min_per_class = 1;
};

// Per class keeps max(ceil(fraction * size), min(min_per_class, size))
// uniformly sampled members.
inline LabeledSubset subsample_labeled(std::span<const int> labels,
                                       double fraction, int min_per_class,
                                       std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    fail("E_INVALID", "fraction must be in (0, 1]");
  if (min_per_class < 1) fail("E_INVALID", "min_per_class must be >= 1");

  const std::vector<int> classes = detail::distinct_labels(labels);
  auto members = detail::members_by_class(labels, classes);

  LabeledSubset subset;
  subset.fraction = fraction;
  subset.min_per_class = min_per_class;

  Rng rng(seed);
  for (auto& class_members : members) {
    const std::size_t size = class_members.size();
    const std::size_t want = std::max(
        static_cast<std::size_t>(
            std::ceil(fraction * static_cast<double>(size))),
        std::min(static_cast<std::size_t>(min_per_class), size));
    rng.shuffle(class_members);
    for (std::size_t t = 0; t < want; ++t)
      subset.labeled_indices.push_back(class_members[t]);
  }
  std::sort(subset.labeled_indices.begin(), subset.labeled_indices.end());
  return subset;
}

}  // namespace svmtune
