#pragma once

// Shared test helpers: random data generation and small dense linear
// algebra used by the oracles (Gaussian elimination, Jacobi eigenvalues).

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <svmtune/dataset.hpp>
#include <svmtune/matrix.hpp>
#include <svmtune/rng.hpp>

namespace testsupport {

inline svmtune::Matrix random_matrix(svmtune::Rng& rng, std::size_t m,
                                     std::size_t n, double lo = -2.0,
                                     double hi = 2.0) {
  svmtune::Matrix x(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      x(i, j) = lo + (hi - lo) * rng.unit();
  return x;
}

inline svmtune::Matrix random_gaussian_matrix(svmtune::Rng& rng, std::size_t m,
                                              std::size_t n) {
  svmtune::Matrix x(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) x(i, j) = rng.normal();
  return x;
}

// Labels 0..n_classes-1 with every class guaranteed at least once.
inline std::vector<int> random_labels(svmtune::Rng& rng, std::size_t m,
                                      int n_classes) {
  std::vector<int> labels(m);
  for (std::size_t i = 0; i < m; ++i)
    labels[i] = static_cast<int>(rng.below(n_classes));
  for (int c = 0; c < n_classes; ++c)
    labels[rng.below(m)] = c;  // may overwrite; fix up below
  // ensure every class present
  for (int c = 0; c < n_classes; ++c) {
    bool found = false;
    for (int l : labels) found = found || l == c;
    if (!found) labels[static_cast<std::size_t>(c)] = c;
  }
  return labels;
}

// Random +/-1 signs with both present.
inline std::vector<int> random_signs(svmtune::Rng& rng, std::size_t m) {
  std::vector<int> signs(m);
  for (std::size_t i = 0; i < m; ++i) signs[i] = rng.below(2) ? 1 : -1;
  signs[0] = 1;
  signs[m - 1] = -1;
  return signs;
}

// Synthetic classification problem: one Gaussian blob per class on a ring,
// with the given per-class size and separation.
inline svmtune::Dataset make_blobs(std::size_t per_class, int n_classes,
                                   double separation, std::uint64_t seed,
                                   std::size_t n_features = 2) {
  svmtune::Rng rng(seed);
  svmtune::Dataset ds;
  ds.name = "blobs";
  ds.features = svmtune::Matrix(per_class * n_classes, n_features);
  std::size_t row = 0;
  for (int c = 0; c < n_classes; ++c) {
    const double angle = 6.28318530717958648 * c / n_classes;
    for (std::size_t i = 0; i < per_class; ++i, ++row) {
      ds.features(row, 0) = separation * std::cos(angle) + rng.normal();
      if (n_features > 1)
        ds.features(row, 1) = separation * std::sin(angle) + rng.normal();
      for (std::size_t j = 2; j < n_features; ++j)
        ds.features(row, j) = rng.normal();
      ds.labels.push_back(c);
    }
    ds.class_names.push_back("class" + std::to_string(c));
  }
  return ds;
}

// Gaussian elimination with partial pivoting; returns false when singular.
inline bool solve_linear(std::vector<std::vector<double>> a,
                         std::vector<double> b, std::vector<double>& x) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (std::abs(a[pivot][col]) < 1e-12) return false;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t r = n; r-- > 0;) {
    double sum = b[r];
    for (std::size_t c = r + 1; c < n; ++c) sum -= a[r][c] * x[c];
    x[r] = sum / a[r][r];
  }
  return true;
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
inline std::vector<double> symmetric_eigenvalues(svmtune::Matrix a) {
  const std::size_t n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off < 1e-22) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-15) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i);
  return values;
}

}  // namespace testsupport
