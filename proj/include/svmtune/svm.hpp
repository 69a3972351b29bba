#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <list>
#include <span>
#include <vector>

#include "svmtune/error.hpp"
#include "svmtune/folds.hpp"
#include "svmtune/heuristics.hpp"
#include "svmtune/kernel.hpp"
#include "svmtune/matrix.hpp"

// Soft-margin RBF-kernel SVM. The binary dual
//
//   max  sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K(x_i, x_j)
//   s.t. 0 <= alpha_i <= C,  sum_i alpha_i y_i = 0
//
// is solved by sequential two-variable optimization over the maximal
// violating pair. Multiclass problems train one binary per class pair
// (one-vs-one) and predict by voting.

namespace svmtune {

struct SolverConfig {
  double tolerance = 1e-3;  // KKT violation threshold
  int max_passes = 10;      // iteration budget: max_passes * m pair updates
  std::uint64_t seed = 0;
};

struct SolverStats {
  std::size_t iterations = 0;
  double final_violation = 0.0;
  bool converged = false;
  // Dual objective after every pair update (filled when record_objective).
  bool record_objective = false;
  std::vector<double> objective_trace;
};

struct BinaryModel {
  Matrix support_vectors;
  std::vector<double> coefficients;  // alpha_i * y_i per support vector
  double bias = 0.0;
  double gamma = 0.0;
  int positive_class = 0;
  int negative_class = 0;
  bool converged = true;
};

namespace detail {

// On-demand kernel rows with least-recently-used eviction.
class KernelCache {
 public:
  KernelCache(const Matrix& x, double gamma, std::size_t capacity)
      : x_(x),
        gamma_(gamma),
        capacity_(std::max<std::size_t>(capacity, 2)),
        rows_(x.rows()),
        where_(x.rows(), lru_.end()) {}

  std::span<const double> row(std::size_t i) {
    if (!rows_[i].empty()) {
      lru_.splice(lru_.begin(), lru_, where_[i]);
      return rows_[i];
    }
    if (cached_ == capacity_) {
      const std::size_t victim = lru_.back();
      lru_.pop_back();
      rows_[victim].clear();
      rows_[victim].shrink_to_fit();
      where_[victim] = lru_.end();
      --cached_;
    }
    auto& values = rows_[i];
    values.resize(x_.rows());
    for (std::size_t j = 0; j < x_.rows(); ++j)
      values[j] = std::exp(-gamma_ * squared_euclidean(x_.row(i), x_.row(j)));
    lru_.push_front(i);
    where_[i] = lru_.begin();
    ++cached_;
    return values;
  }

 private:
  const Matrix& x_;
  double gamma_;
  std::size_t capacity_;
  std::vector<std::vector<double>> rows_;
  std::list<std::size_t> lru_;
  std::vector<std::list<std::size_t>::iterator> where_;
  std::size_t cached_ = 0;
};

inline constexpr std::size_t kKernelCacheRows = 4000;

}  // namespace detail

inline BinaryModel train_binary(const Matrix& features,
                                std::span<const int> signs, SvmParams params,
                                const SolverConfig& config,
                                SolverStats* stats = nullptr) {
  const std::size_t m = features.rows();
  if (signs.size() != m) fail("E_INVALID", "sign count mismatch");
  if (!(params.c > 0.0) || !std::isfinite(params.c) || !(params.gamma > 0.0) ||
      !std::isfinite(params.gamma))
    fail("E_INVALID", "params must be positive and finite");
  if (config.max_passes < 1 || !(config.tolerance > 0.0))
    fail("E_INVALID", "invalid solver config");
  bool has_pos = false, has_neg = false;
  for (int s : signs) {
    if (s == 1) has_pos = true;
    else if (s == -1) has_neg = true;
    else fail("E_INVALID", "signs must be +1 or -1");
  }
  if (!has_pos || !has_neg) fail("E_INVALID", "need both classes present");

  const double c = params.c;
  std::vector<double> alpha(m, 0.0);
  std::vector<double> gradient(m, -1.0);  // d/dalpha of the minimized form
  detail::KernelCache cache(features, params.gamma,
                            std::min(m, detail::kKernelCacheRows));

  const std::size_t budget = static_cast<std::size_t>(config.max_passes) * m;
  bool converged = false;
  double violation = 0.0;
  std::size_t iter = 0;

  auto record = [&] {
    if (stats && stats->record_objective) {
      // With g = Q alpha - e the dual objective sum(alpha) - 1/2 alpha'Q alpha
      // equals 1/2 sum_t alpha_t (1 - g_t).
      double dual = 0.0;
      for (std::size_t t = 0; t < m; ++t)
        dual += 0.5 * alpha[t] * (1.0 - gradient[t]);
      stats->objective_trace.push_back(dual);
    }
  };
  record();

  for (; iter < budget; ++iter) {
    // Maximal violating pair: i maximizes -y*g over the "can increase" set,
    // j minimizes it over the "can decrease" set.
    std::size_t best_i = m, best_j = m;
    double up = -std::numeric_limits<double>::infinity();
    double low = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < m; ++t) {
      const double score = -signs[t] * gradient[t];
      const bool in_up = (signs[t] > 0 && alpha[t] < c) ||
                         (signs[t] < 0 && alpha[t] > 0.0);
      const bool in_low = (signs[t] > 0 && alpha[t] > 0.0) ||
                          (signs[t] < 0 && alpha[t] < c);
      if (in_up && score > up) {
        up = score;
        best_i = t;
      }
      if (in_low && score < low) {
        low = score;
        best_j = t;
      }
    }
    violation = up - low;
    if (violation <= config.tolerance) {
      converged = true;
      break;
    }

    const std::size_t i = best_i, j = best_j;
    const std::span<const double> ki = cache.row(i);
    const std::span<const double> kj = cache.row(j);

    // Step s along the feasible direction (d_alpha_i, d_alpha_j) =
    // (y_i s, -y_j s); curvature is K_ii + K_jj - 2 K_ij >= 0.
    double quad = ki[i] + kj[j] - 2.0 * ki[j];
    if (quad <= 0.0) quad = 1e-12;
    double step = violation / quad;

    const double cap_i = signs[i] > 0 ? c - alpha[i] : alpha[i];
    const double cap_j = signs[j] > 0 ? alpha[j] : c - alpha[j];
    step = std::min(step, std::min(cap_i, cap_j));

    alpha[i] += signs[i] * step;
    alpha[j] -= signs[j] * step;
    // Snap to exact bounds so the support-vector filter stays crisp.
    if (step == cap_i) alpha[i] = signs[i] > 0 ? c : 0.0;
    if (step == cap_j) alpha[j] = signs[j] > 0 ? 0.0 : c;

    for (std::size_t t = 0; t < m; ++t)
      gradient[t] += signs[t] * step * (ki[t] - kj[t]);
    record();
  }

  // Bias: free support vectors satisfy y_t f(x_t) = 1 exactly, so average
  // -y_t g_t over them; otherwise take the midpoint of the KKT bounds.
  double bias = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < m; ++t)
    if (alpha[t] > 0.0 && alpha[t] < c) {
      bias += -signs[t] * gradient[t];
      ++free_count;
    }
  if (free_count > 0) {
    bias /= static_cast<double>(free_count);
  } else {
    double up = -std::numeric_limits<double>::infinity();
    double low = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < m; ++t) {
      const double score = -signs[t] * gradient[t];
      const bool in_up = (signs[t] > 0 && alpha[t] < c) ||
                         (signs[t] < 0 && alpha[t] > 0.0);
      const bool in_low = (signs[t] > 0 && alpha[t] > 0.0) ||
                          (signs[t] < 0 && alpha[t] < c);
      if (in_up) up = std::max(up, score);
      if (in_low) low = std::min(low, score);
    }
    bias = (up + low) / 2.0;
  }

  if (stats) {
    stats->iterations = iter;
    stats->final_violation = violation;
    stats->converged = converged;
  }

  std::vector<std::size_t> sv;
  for (std::size_t t = 0; t < m; ++t)
    if (alpha[t] > 0.0) sv.push_back(t);

  BinaryModel model;
  model.support_vectors = features.take_rows(sv);
  model.coefficients.reserve(sv.size());
  for (std::size_t t : sv) model.coefficients.push_back(alpha[t] * signs[t]);
  model.bias = bias;
  model.gamma = params.gamma;
  model.converged = converged;
  return model;
}

// Pre-sign decision value: sum_i coeff_i K(x, sv_i) + b.
inline double decision_value(const BinaryModel& model,
                             std::span<const double> x) {
  if (x.size() != model.support_vectors.cols())
    fail("E_INVALID", "dimension mismatch");
  double value = model.bias;
  for (std::size_t i = 0; i < model.support_vectors.rows(); ++i)
    value += model.coefficients[i] *
             std::exp(-model.gamma *
                      squared_euclidean(model.support_vectors.row(i), x));
  return value;
}

struct MulticlassModel {
  std::vector<BinaryModel> binaries;  // one per unordered class pair
  std::vector<int> class_ids;         // distinct training classes, ascending
  int n_classes = 0;
  SvmParams params;
  std::size_t unconverged = 0;
};

// One-vs-one ensemble; within each pair the lower class index plays the +1
// role.
inline MulticlassModel train_ovo(const Matrix& features,
                                 std::span<const int> labels, SvmParams params,
                                 const SolverConfig& config) {
  if (labels.size() != features.rows()) fail("E_INVALID", "label count mismatch");
  MulticlassModel model;
  model.params = params;
  model.class_ids = detail::distinct_labels(labels);
  model.n_classes = static_cast<int>(model.class_ids.size());
  if (model.n_classes < 2) fail("E_INVALID", "need at least two classes");

  for (std::size_t a = 0; a + 1 < model.class_ids.size(); ++a)
    for (std::size_t b = a + 1; b < model.class_ids.size(); ++b) {
      std::vector<std::size_t> rows;
      std::vector<int> signs;
      for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == model.class_ids[a]) {
          rows.push_back(i);
          signs.push_back(1);
        } else if (labels[i] == model.class_ids[b]) {
          rows.push_back(i);
          signs.push_back(-1);
        }
      }
      BinaryModel binary =
          train_binary(features.take_rows(rows), signs, params, config);
      binary.positive_class = model.class_ids[a];
      binary.negative_class = model.class_ids[b];
      if (!binary.converged) ++model.unconverged;
      model.binaries.push_back(std::move(binary));
    }
  return model;
}

// Majority vote; ties broken by the summed |decision value| of the votes
// cast for each tied class, then by the lowest class index.
inline int predict(const MulticlassModel& model, std::span<const double> x) {
  std::vector<int> votes(model.class_ids.size(), 0);
  std::vector<double> strength(model.class_ids.size(), 0.0);
  auto slot = [&](int cls) {
    for (std::size_t s = 0; s < model.class_ids.size(); ++s)
      if (model.class_ids[s] == cls) return s;
    fail("E_INVALID", "class not in model");
  };
  for (const BinaryModel& binary : model.binaries) {
    const double value = decision_value(binary, x);
    const int winner = value > 0.0 ? binary.positive_class : binary.negative_class;
    const std::size_t s = slot(winner);
    ++votes[s];
    strength[s] += std::abs(value);
  }
  std::size_t best = 0;
  for (std::size_t s = 1; s < votes.size(); ++s) {
    if (votes[s] > votes[best] ||
        (votes[s] == votes[best] && strength[s] > strength[best]))
      best = s;
  }
  return model.class_ids[best];
}

inline std::vector<int> predict_all(const MulticlassModel& model,
                                    const Matrix& features) {
  std::vector<int> out;
  out.reserve(features.rows());
  for (std::size_t i = 0; i < features.rows(); ++i)
    out.push_back(predict(model, features.row(i)));
  return out;
}

}  // namespace svmtune
