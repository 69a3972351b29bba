#pragma once

#include <span>
#include <vector>

#include "svmtune/error.hpp"

namespace svmtune {

// Percentage of predictions equal to the truth.
inline double overall_accuracy(std::span<const int> predicted,
                               std::span<const int> truth) {
  if (predicted.size() != truth.size()) fail("E_INVALID", "length mismatch");
  if (truth.empty()) fail("E_INVALID", "empty sequences");
  std::size_t matches = 0;
  for (std::size_t i = 0; i < truth.size(); ++i)
    if (predicted[i] == truth[i]) ++matches;
  return 100.0 * static_cast<double>(matches) /
         static_cast<double>(truth.size());
}

// Unweighted mean of per-class recalls, in percent. Classes absent from the
// truth are excluded from the mean.
inline double average_accuracy(std::span<const int> predicted,
                               std::span<const int> truth, int n_classes) {
  if (predicted.size() != truth.size()) fail("E_INVALID", "length mismatch");
  if (truth.empty()) fail("E_INVALID", "empty sequences");
  if (n_classes < 1) fail("E_INVALID", "need at least one class");
  std::vector<std::size_t> total(n_classes, 0), correct(n_classes, 0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= n_classes)
      fail("E_INVALID", "label out of range");
    ++total[truth[i]];
    if (predicted[i] == truth[i]) ++correct[truth[i]];
  }
  double sum = 0.0;
  int present = 0;
  for (int c = 0; c < n_classes; ++c) {
    if (total[c] == 0) continue;
    sum += static_cast<double>(correct[c]) / static_cast<double>(total[c]);
    ++present;
  }
  return 100.0 * sum / static_cast<double>(present);
}

}  // namespace svmtune
