#pragma once

#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "svmtune/dataset.hpp"
#include "svmtune/folds.hpp"
#include "svmtune/grid.hpp"
#include "svmtune/heuristics.hpp"
#include "svmtune/kernel.hpp"
#include "svmtune/metrics.hpp"
#include "svmtune/scaler.hpp"
#include "svmtune/svm.hpp"

// Nested, stratified, repeated cross-validation. The external folds estimate
// generalization; parameters come either from a heuristic evaluated on the
// (standardized) training fold, or from a grid search scored by an internal
// cross-validation on that fold. In the semi-supervised variant only a small
// labelled subset of each training fold is available to the classifier and
// to the internal grid search, while unsupervised heuristics and the scaler
// still see the full training fold.
//
// All randomness flows from CvConfig::base_seed through the derivation
// helpers below, so a run is reproducible bit for bit.

namespace svmtune {

struct CvConfig {
  int k_external = 5;
  int k_internal = 3;
  int repetitions = 10;
  std::uint64_t base_seed = 0;
};

struct SemiSupervisedConfig {
  double fraction = 0.1;
  int min_per_class = 5;
};

struct FoldLog {
  int repetition = 0;
  int fold = 0;
  SvmParams chosen;
  bool from_grid = false;      // provenance: grid search vs raw heuristic
  std::size_t grid_points = 0; // grid size scored (0 for raw heuristics)
  std::uint64_t scaler_rows_hash = 0;  // hash of the rows the scaler saw
  std::vector<std::size_t> labeled_per_class;  // semi-supervised runs only
  std::size_t unconverged_trainings = 0;
};

struct RunScores {
  std::vector<double> per_repetition_oa;
  std::vector<double> per_repetition_aa;
  double mean_oa = 0.0;
  double mean_aa = 0.0;
  std::vector<FoldLog> fold_logs;
  std::vector<std::string> warnings;
};

struct SelectionStrategy {
  enum class Kind { Heuristic, GridDefault, GridSeeded };
  Kind kind = Kind::Heuristic;
  HeuristicId heuristic_id = HeuristicId::Default;

  static SelectionStrategy heuristic(HeuristicId id) {
    return {Kind::Heuristic, id};
  }
  static SelectionStrategy grid_default() {
    return {Kind::GridDefault, HeuristicId::Default};
  }
  static SelectionStrategy grid_seeded(HeuristicId id) {
    return {Kind::GridSeeded, id};
  }

  bool uses_heuristic() const { return kind != Kind::GridDefault; }

  std::string name() const {
    switch (kind) {
      case Kind::Heuristic: return to_string(heuristic_id);
      case Kind::GridDefault: return "gscv_default";
      case Kind::GridSeeded: return std::string("gscv+") + to_string(heuristic_id);
    }
    fail("E_INVALID", "unknown strategy kind");
  }
};

// Seed derivation levels; every repetition reshuffles both the external and
// the internal folds.
inline std::uint64_t external_fold_seed(std::uint64_t base, int rep) {
  return derive_seed(base, {0x01, static_cast<std::uint64_t>(rep)});
}
inline std::uint64_t internal_fold_seed(std::uint64_t base, int rep, int fold) {
  return derive_seed(base, {0x02, static_cast<std::uint64_t>(rep),
                            static_cast<std::uint64_t>(fold)});
}
inline std::uint64_t heuristic_sample_seed(std::uint64_t base, int rep, int fold) {
  return derive_seed(base, {0x03, static_cast<std::uint64_t>(rep),
                            static_cast<std::uint64_t>(fold)});
}
inline std::uint64_t subsample_seed(std::uint64_t base, int rep, int fold) {
  return derive_seed(base, {0x04, static_cast<std::uint64_t>(rep),
                            static_cast<std::uint64_t>(fold)});
}

namespace detail {

inline std::vector<int> take_labels(std::span<const int> labels,
                                    std::span<const std::size_t> indices) {
  std::vector<int> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(labels[i]);
  return out;
}

inline std::uint64_t hash_indices(std::span<const std::size_t> indices) {
  std::uint64_t h = 0x9ae16a3b2f90404fULL;
  for (std::size_t i : indices) h = splitmix64(h ^ splitmix64(i + 1));
  return h;
}

inline double mean_of(std::span<const double> values) {
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

}  // namespace detail

// Scores every grid point by mean overall accuracy over an internal
// stratified cross-validation (scaler refit on each internal training part)
// and returns the argmax; ties go to the lower C, then the lower gamma.
inline SvmParams inner_cv_select(const Matrix& train_raw,
                                 std::span<const int> labels,
                                 const GridSpec& grid, int k_internal,
                                 std::uint64_t seed, const SolverConfig& solver,
                                 std::vector<std::string>* warnings = nullptr,
                                 std::size_t* unconverged = nullptr) {
  if (grid.points.empty()) fail("E_INVALID", "empty grid");
  const FoldPlan plan = stratified_kfold(labels, k_internal, seed);

  std::vector<double> sums(grid.points.size(), 0.0);
  int folds_used = 0;
  for (int g = 0; g < k_internal; ++g) {
    const auto val_idx = plan.fold_indices(g);
    const auto fit_idx = plan.complement_indices(g);
    const Matrix fit_raw = train_raw.take_rows(fit_idx);
    const Matrix val_raw = train_raw.take_rows(val_idx);
    const std::vector<int> fit_labels = detail::take_labels(labels, fit_idx);
    const std::vector<int> val_labels = detail::take_labels(labels, val_idx);

    Scaler scaler;
    try {
      scaler = fit_scaler(fit_raw);
    } catch (const Error& e) {
      if (warnings)
        warnings->push_back(std::string("internal fold skipped: ") + e.what());
      continue;
    }
    const Matrix fit_std = transform(scaler, fit_raw);
    const Matrix val_std = transform(scaler, val_raw);

    for (std::size_t p = 0; p < grid.points.size(); ++p) {
      const MulticlassModel model =
          train_ovo(fit_std, fit_labels, grid.points[p], solver);
      if (unconverged) *unconverged += model.unconverged;
      sums[p] += overall_accuracy(predict_all(model, val_std), val_labels);
    }
    ++folds_used;
  }
  if (folds_used == 0) fail("E_DEGENERATE", "no usable internal folds");

  std::size_t best = 0;
  for (std::size_t p = 1; p < sums.size(); ++p) {
    if (sums[p] > sums[best]) {
      best = p;
    } else if (sums[p] == sums[best]) {
      const SvmParams& a = grid.points[p];
      const SvmParams& b = grid.points[best];
      if (a.c < b.c || (a.c == b.c && a.gamma < b.gamma)) best = p;
    }
  }
  return grid.points[best];
}

namespace detail {

struct CvMode {
  bool semi = false;
  double fraction = 1.0;
  int min_per_class = 1;
};

// Heuristic evaluated on one training fold; degenerate estimates fall back
// to (1, 1) with a logged warning instead of aborting the run.
inline SvmParams evaluate_fold_heuristic(
    HeuristicId id, const Matrix& full_std, const DistanceSample& sample,
    const Matrix& labeled_std, std::span<const int> labeled_labels,
    int n_classes, std::uint64_t seed, std::vector<std::string>& warnings,
    int rep, int fold) {
  try {
    if (requires_labels(id)) {
      const HeuristicInput input{labeled_std, sample, labeled_labels,
                                 n_classes, seed};
      return estimate(id, input);
    }
    const HeuristicInput input{full_std, sample, {}, n_classes, seed};
    return estimate(id, input);
  } catch (const Error& e) {
    warnings.push_back(std::string(to_string(id)) + " failed in rep " +
                       std::to_string(rep) + " fold " + std::to_string(fold) +
                       ", using (1,1): " + e.what());
    return {1.0, 1.0};
  }
}

inline RunScores run_cv(const Dataset& ds, const SelectionStrategy& strategy,
                        const CvConfig& cv, const SolverConfig& solver,
                        const CvMode& mode) {
  if (cv.k_external < 2 || cv.k_internal < 2 || cv.repetitions < 1)
    fail("E_INVALID", "invalid cross-validation configuration");

  RunScores scores;
  for (int rep = 0; rep < cv.repetitions; ++rep) {
    const FoldPlan plan = stratified_kfold(ds.labels, cv.k_external,
                                           external_fold_seed(cv.base_seed, rep));
    double oa_sum = 0.0, aa_sum = 0.0;
    for (int fold = 0; fold < cv.k_external; ++fold) {
      const auto test_idx = plan.fold_indices(fold);
      const auto train_idx = plan.complement_indices(fold);
      const Matrix train_raw = ds.features.take_rows(train_idx);
      const Matrix test_raw = ds.features.take_rows(test_idx);
      const std::vector<int> train_labels = take_labels(ds.labels, train_idx);
      const std::vector<int> test_labels = take_labels(ds.labels, test_idx);

      // The scaler sees the full training fold in both modes and never the
      // test rows.
      const Scaler scaler = fit_scaler(train_raw);
      const Matrix train_std = transform(scaler, train_raw);
      const Matrix test_std = transform(scaler, test_raw);

      // Labelled subset: everything in the supervised mode, a per-class
      // sample in the semi-supervised one. Positions index the training fold.
      std::vector<std::size_t> labeled_pos(train_idx.size());
      std::iota(labeled_pos.begin(), labeled_pos.end(), std::size_t{0});
      std::vector<std::size_t> labeled_per_class;
      if (mode.semi) {
        const LabeledSubset subset = subsample_labeled(
            train_labels, mode.fraction, mode.min_per_class,
            subsample_seed(cv.base_seed, rep, fold));
        labeled_pos = subset.labeled_indices;
        labeled_per_class.assign(ds.class_names.size(), 0);
        for (std::size_t p : labeled_pos)
          ++labeled_per_class[static_cast<std::size_t>(train_labels[p])];
      }
      const Matrix labeled_raw = train_raw.take_rows(labeled_pos);
      const Matrix labeled_std = train_std.take_rows(labeled_pos);
      const std::vector<int> labeled_labels =
          take_labels(train_labels, labeled_pos);

      FoldLog log;
      log.repetition = rep;
      log.fold = fold;
      log.scaler_rows_hash = hash_indices(train_idx);
      log.labeled_per_class = labeled_per_class;

      SvmParams heuristic_params{1.0, 1.0};
      if (strategy.uses_heuristic()) {
        const std::uint64_t sample_seed =
            heuristic_sample_seed(cv.base_seed, rep, fold);
        const DistanceSample sample =
            pairwise_distances(train_std, kDefaultPairBudget, sample_seed);
        heuristic_params = evaluate_fold_heuristic(
            strategy.heuristic_id, train_std, sample, labeled_std,
            labeled_labels, ds.n_classes(), sample_seed, scores.warnings, rep,
            fold);
      }

      SvmParams chosen{1.0, 1.0};
      if (strategy.kind == SelectionStrategy::Kind::Heuristic) {
        chosen = heuristic_params;
        log.from_grid = false;
      } else {
        const SvmParams seed_params =
            strategy.kind == SelectionStrategy::Kind::GridDefault
                ? SvmParams{1.0, 1.0}
                : heuristic_params;
        const GridSpec grid = build_grid(seed_params);
        log.from_grid = true;
        log.grid_points = grid.points.size();

        int k_use = cv.k_internal;
        if (mode.semi) {
          std::size_t min_class = labeled_labels.size();
          for (int c = 0; c < ds.n_classes(); ++c) {
            std::size_t count = 0;
            for (int l : labeled_labels)
              if (l == c) ++count;
            if (count > 0) min_class = std::min(min_class, count);
          }
          k_use = std::min<int>(cv.k_internal, static_cast<int>(min_class));
        }
        if (k_use >= 2) {
          if (k_use < cv.k_internal)
            scores.warnings.push_back(
                "internal folds reduced to " + std::to_string(k_use) +
                " in rep " + std::to_string(rep) + " fold " +
                std::to_string(fold));
          chosen = inner_cv_select(labeled_raw, labeled_labels, grid, k_use,
                                   internal_fold_seed(cv.base_seed, rep, fold),
                                   solver, &scores.warnings,
                                   &log.unconverged_trainings);
        } else {
          scores.warnings.push_back(
              "labelled subset too small for internal CV in rep " +
              std::to_string(rep) + " fold " + std::to_string(fold) +
              ", using seed params");
          chosen = seed_params;
        }
      }
      log.chosen = chosen;

      const MulticlassModel model =
          train_ovo(labeled_std, labeled_labels, chosen, solver);
      log.unconverged_trainings += model.unconverged;
      const std::vector<int> predictions = predict_all(model, test_std);
      oa_sum += overall_accuracy(predictions, test_labels);
      aa_sum += average_accuracy(predictions, test_labels, ds.n_classes());
      scores.fold_logs.push_back(std::move(log));
    }
    scores.per_repetition_oa.push_back(oa_sum / cv.k_external);
    scores.per_repetition_aa.push_back(aa_sum / cv.k_external);
  }

  scores.mean_oa = mean_of(scores.per_repetition_oa);
  scores.mean_aa = mean_of(scores.per_repetition_aa);

  std::size_t unconverged = 0;
  for (const FoldLog& log : scores.fold_logs)
    unconverged += log.unconverged_trainings;
  if (unconverged > 0)
    scores.warnings.push_back(std::to_string(unconverged) +
                              " trainings stopped at the iteration budget");
  return scores;
}

}  // namespace detail

inline RunScores run_external_cv(const Dataset& ds,
                                 const SelectionStrategy& strategy,
                                 const CvConfig& cv,
                                 const SolverConfig& solver) {
  return detail::run_cv(ds, strategy, cv, solver, {});
}

inline RunScores run_semi_supervised(const Dataset& ds,
                                     const SelectionStrategy& strategy,
                                     const CvConfig& cv,
                                     const SemiSupervisedConfig& semi,
                                     const SolverConfig& solver) {
  detail::CvMode mode;
  mode.semi = true;
  mode.fraction = semi.fraction;
  mode.min_per_class = semi.min_per_class;
  return detail::run_cv(ds, strategy, cv, solver, mode);
}

}  // namespace svmtune
