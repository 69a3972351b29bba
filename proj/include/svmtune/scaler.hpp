#pragma once

#include <cmath>
#include <vector>

#include "svmtune/error.hpp"
#include "svmtune/matrix.hpp"

// Column standardization. Statistics are estimated on training rows only and
// applied unchanged elsewhere; variances are population variances (divide by
// the row count).

namespace svmtune {

struct Scaler {
  std::vector<double> means;
  std::vector<double> stds;
};

inline Scaler fit_scaler(const Matrix& train) {
  if (train.rows() < 2) fail("E_INVALID", "need at least two training rows");
  Scaler scaler;
  scaler.means.resize(train.cols());
  scaler.stds.resize(train.cols());
  const double m = static_cast<double>(train.rows());
  for (std::size_t j = 0; j < train.cols(); ++j) {
    double lo = train(0, j), hi = train(0, j), sum = 0.0;
    for (std::size_t i = 0; i < train.rows(); ++i) {
      const double v = train(i, j);
      sum += v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (lo == hi)
      fail("E_DEGENERATE", "zero-variance training column " + std::to_string(j));
    const double mean = sum / m;
    double ss = 0.0;
    for (std::size_t i = 0; i < train.rows(); ++i) {
      const double d = train(i, j) - mean;
      ss += d * d;
    }
    scaler.means[j] = mean;
    scaler.stds[j] = std::sqrt(ss / m);
  }
  return scaler;
}

inline Matrix transform(const Scaler& scaler, const Matrix& features) {
  if (features.cols() != scaler.means.size())
    fail("E_INVALID", "column count does not match scaler");
  Matrix out(features.rows(), features.cols());
  for (std::size_t i = 0; i < features.rows(); ++i)
    for (std::size_t j = 0; j < features.cols(); ++j)
      out(i, j) = (features(i, j) - scaler.means[j]) / scaler.stds[j];
  return out;
}

}  // namespace svmtune
