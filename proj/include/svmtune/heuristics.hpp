#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "svmtune/error.hpp"
#include "svmtune/kernel.hpp"
#include "svmtune/matrix.hpp"

// Closed-form estimators for the RBF-SVM parameters (C, gamma), computed
// from (already standardized) features. All are unsupervised except the
// Jaakkola rule, which needs class labels. Each named heuristic composes a
// gamma rule with a C rule; most use the default C = 1.

namespace svmtune {

struct SvmParams {
  double c = 1.0;
  double gamma = 1.0;

  bool operator==(const SvmParams&) const = default;
};

enum class HeuristicId {
  Default,
  Covtrace,
  CovtraceC,
  CovtraceMC,
  Gelbart,
  Smola10,
  Smola50,
  Smola90,
  Chapelle,
  Soares,
  SoaresMed,
  Jaakkola,
};

inline constexpr HeuristicId kAllHeuristics[] = {
    HeuristicId::Default,  HeuristicId::Covtrace, HeuristicId::CovtraceC,
    HeuristicId::CovtraceMC, HeuristicId::Gelbart, HeuristicId::Smola10,
    HeuristicId::Smola50,  HeuristicId::Smola90,  HeuristicId::Chapelle,
    HeuristicId::Soares,   HeuristicId::SoaresMed, HeuristicId::Jaakkola,
};

inline const char* to_string(HeuristicId id) {
  switch (id) {
    case HeuristicId::Default: return "default";
    case HeuristicId::Covtrace: return "covtrace";
    case HeuristicId::CovtraceC: return "covtrace+C";
    case HeuristicId::CovtraceMC: return "covtrace+MC";
    case HeuristicId::Gelbart: return "Gelbart";
    case HeuristicId::Smola10: return "Smola_10";
    case HeuristicId::Smola50: return "Smola_50";
    case HeuristicId::Smola90: return "Smola_90";
    case HeuristicId::Chapelle: return "Chapelle";
    case HeuristicId::Soares: return "Soares";
    case HeuristicId::SoaresMed: return "Soares_med";
    case HeuristicId::Jaakkola: return "Jaakkola";
  }
  fail("E_INVALID", "unknown heuristic id");
}

inline HeuristicId heuristic_from_string(const std::string& name) {
  for (HeuristicId id : kAllHeuristics)
    if (name == to_string(id)) return id;
  fail("E_INVALID", "unknown heuristic: " + name);
}

inline bool requires_labels(HeuristicId id) {
  return id == HeuristicId::Jaakkola;
}

struct HeuristicInput {
  const Matrix& features;            // standardized
  const DistanceSample& distances;   // sampled over the same features
  std::span<const int> labels = {};  // needed by Jaakkola only
  int n_classes = 0;                 // needed by the Chapelle gamma rule
  std::uint64_t seed = 0;
};

namespace detail {

// Population variance; exactly zero for a constant sequence.
inline double population_variance(std::span<const double> values) {
  double lo = values.front(), hi = values.front(), sum = 0.0;
  for (double v : values) {
    sum += v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo == hi) return 0.0;
  const double mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(values.size());
}

// Distance from each point to its nearest other point (exhaustive search).
inline std::vector<double> nearest_neighbour_distances(const Matrix& x) {
  const std::size_t m = x.rows();
  std::vector<double> nearest(m, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i + 1 < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const double d2 = squared_euclidean(x.row(i), x.row(j));
      nearest[i] = std::min(nearest[i], d2);
      nearest[j] = std::min(nearest[j], d2);
    }
  for (double& d : nearest) d = std::sqrt(d);
  return nearest;
}

inline constexpr double kVarianceFloor = 1e-12;

}  // namespace detail

// gamma = 1 / (2 Tr(Cov(X))): the trace is the sum of per-feature
// population variances, so this reduces to 1/(2n) on unit-variance data.
inline double covtrace_gamma(const Matrix& features) {
  if (features.rows() < 2) fail("E_INVALID", "need at least two examples");
  double trace = 0.0;
  std::vector<double> column(features.rows());
  for (std::size_t j = 0; j < features.cols(); ++j) {
    for (std::size_t i = 0; i < features.rows(); ++i) column[i] = features(i, j);
    trace += detail::population_variance(column);
  }
  if (trace <= 0.0) fail("E_DEGENERATE", "zero total variance");
  return 1.0 / (2.0 * trace);
}

// gamma = 1 / (n Var(X)) with Var taken over all matrix elements pooled.
inline double gelbart_gamma(const Matrix& features) {
  if (features.rows() < 1 || features.cols() < 1)
    fail("E_INVALID", "empty feature matrix");
  const double var = detail::population_variance(features.data());
  if (var <= 0.0) fail("E_DEGENERATE", "zero element-wise variance");
  return 1.0 / (static_cast<double>(features.cols()) * var);
}

// lambda = 1 / quantile_q(distances), gamma = lambda^2.
inline double smola_gamma(const DistanceSample& distances, double q) {
  if (!(q > 0.0 && q < 1.0)) fail("E_INVALID", "q must be in (0, 1)");
  const double d = quantile(distances.values, q);
  if (d <= 0.0) fail("E_DEGENERATE", "zero distance quantile");
  return 1.0 / (d * d);
}

// gamma = 1 / (2 quantile_{1/n_c}(distances)).
inline double chapelle_gamma(const DistanceSample& distances, int n_classes) {
  if (n_classes < 2) fail("E_INVALID", "need at least two classes");
  const double d = quantile(distances.values, 1.0 / n_classes);
  if (d <= 0.0) fail("E_DEGENERATE", "zero distance quantile");
  return 1.0 / (2.0 * d);
}

enum class Aggregate { Mean, Median };

// gamma = 1 / (2 agg(D)) where D holds each point's distance to its nearest
// other point.
inline double soares_gamma(const Matrix& features, Aggregate aggregate) {
  if (features.rows() < 2) fail("E_INVALID", "need at least two examples");
  const std::vector<double> nearest =
      detail::nearest_neighbour_distances(features);
  double agg = 0.0;
  if (aggregate == Aggregate::Mean) {
    for (double d : nearest) agg += d;
    agg /= static_cast<double>(nearest.size());
  } else {
    agg = quantile(nearest, 0.5);
  }
  if (agg <= 0.0) fail("E_DEGENERATE", "zero nearest-neighbour aggregate");
  return 1.0 / (2.0 * agg);
}

// sigma = median distance to the nearest point of a different class;
// gamma = 1 / (2 sigma^2). The only supervised rule here.
inline double jaakkola_gamma(const Matrix& features, std::span<const int> labels) {
  const std::size_t m = features.rows();
  if (labels.size() != m) fail("E_INVALID", "label count mismatch");
  std::vector<double> nearest(m, std::numeric_limits<double>::infinity());
  bool two_classes = false;
  for (std::size_t i = 0; i + 1 < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      if (labels[i] == labels[j]) continue;
      two_classes = true;
      const double d2 = squared_euclidean(features.row(i), features.row(j));
      nearest[i] = std::min(nearest[i], d2);
      nearest[j] = std::min(nearest[j], d2);
    }
  if (!two_classes) fail("E_INVALID", "need at least two classes");
  std::vector<double> finite;
  finite.reserve(m);
  for (double d : nearest)
    if (std::isfinite(d)) finite.push_back(std::sqrt(d));
  const double sigma = quantile(finite, 0.5);
  if (sigma <= 0.0) fail("E_DEGENERATE", "zero inter-class median distance");
  return 1.0 / (2.0 * sigma * sigma);
}

// C = 1 / s^2 with s^2 = 1 - a, a being the mean kernel value over all
// ordered pairs including i = j.
inline double chapelle_c(const Matrix& features, double gamma) {
  const std::size_t m = features.rows();
  if (m < 2) fail("E_INVALID", "need at least two examples");
  if (!(gamma > 0.0)) fail("E_INVALID", "gamma must be positive");
  double off_diagonal = 0.0;
  for (std::size_t i = 0; i + 1 < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      off_diagonal += std::exp(-gamma * squared_euclidean(features.row(i),
                                                          features.row(j)));
  const double md = static_cast<double>(m);
  const double a = (md + 2.0 * off_diagonal) / (md * md);
  const double s2 = 1.0 - a;
  if (s2 <= detail::kVarianceFloor)
    fail("E_DEGENERATE", "degenerate kernel variance");
  return 1.0 / s2;
}

namespace detail {

inline double modified_chapelle_c_from(const std::vector<double>& distances,
                                       std::size_t n_features, double gamma) {
  const double threshold = quantile(distances, 1.0 / static_cast<double>(n_features));
  double sum = 0.0;
  std::size_t count = 0;
  for (double d : distances)
    if (d <= threshold) {
      sum += std::exp(-gamma * d * d);
      ++count;
    }
  if (count == 0) fail("E_DEGENERATE", "no close pairs below threshold");
  const double a_prime = sum / static_cast<double>(count);
  const double s2 = 1.0 - a_prime;
  if (s2 <= kVarianceFloor) fail("E_DEGENERATE", "degenerate kernel variance");
  return 1.0 / s2;
}

}  // namespace detail

// Variant of chapelle_c restricted to close pairs: pairs whose distance lies
// at or below the 1/n quantile of all pairwise distances. Averaging the
// kernel over close pairs only raises a and therefore C.
inline double modified_chapelle_c(const Matrix& features, double gamma) {
  const std::size_t m = features.rows();
  if (m < 2) fail("E_INVALID", "need at least two examples");
  if (features.cols() < 1) fail("E_INVALID", "empty feature matrix");
  if (!(gamma > 0.0)) fail("E_INVALID", "gamma must be positive");
  std::vector<double> distances;
  distances.reserve(m * (m - 1) / 2);
  for (std::size_t i = 0; i + 1 < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      distances.push_back(euclidean(features.row(i), features.row(j)));
  return detail::modified_chapelle_c_from(distances, features.cols(), gamma);
}

// Same rule evaluated on a (possibly sampled) distance set.
inline double modified_chapelle_c(const Matrix& features, double gamma,
                                  const DistanceSample& distances) {
  if (!(gamma > 0.0)) fail("E_INVALID", "gamma must be positive");
  if (features.cols() < 1) fail("E_INVALID", "empty feature matrix");
  return detail::modified_chapelle_c_from(distances.values, features.cols(),
                                          gamma);
}

// Dispatch table from heuristic id to the composed (C, gamma) estimate.
inline SvmParams estimate(HeuristicId id, const HeuristicInput& input) {
  switch (id) {
    case HeuristicId::Default:
      return {1.0, 1.0};
    case HeuristicId::Covtrace:
      return {1.0, covtrace_gamma(input.features)};
    case HeuristicId::CovtraceC: {
      const double gamma = covtrace_gamma(input.features);
      return {chapelle_c(input.features, gamma), gamma};
    }
    case HeuristicId::CovtraceMC: {
      const double gamma = covtrace_gamma(input.features);
      return {modified_chapelle_c(input.features, gamma, input.distances), gamma};
    }
    case HeuristicId::Gelbart:
      return {1.0, gelbart_gamma(input.features)};
    case HeuristicId::Smola10:
      return {1.0, smola_gamma(input.distances, 0.1)};
    case HeuristicId::Smola50:
      return {1.0, smola_gamma(input.distances, 0.5)};
    case HeuristicId::Smola90:
      return {1.0, smola_gamma(input.distances, 0.9)};
    case HeuristicId::Chapelle: {
      const double gamma = chapelle_gamma(input.distances, input.n_classes);
      return {chapelle_c(input.features, gamma), gamma};
    }
    case HeuristicId::Soares:
      return {1.0, soares_gamma(input.features, Aggregate::Mean)};
    case HeuristicId::SoaresMed:
      return {1.0, soares_gamma(input.features, Aggregate::Median)};
    case HeuristicId::Jaakkola:
      return {1.0, jaakkola_gamma(input.features, input.labels)};
  }
  fail("E_INVALID", "unknown heuristic id");
}

}  // namespace svmtune
