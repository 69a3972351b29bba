#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>

#include <svmtune/cross_validation.hpp>
#include <svmtune/grid.hpp>
#include <svmtune/metrics.hpp>
#include <svmtune/mww.hpp>
#include <svmtune/report.hpp>

#include "oracles.hpp"
#include "support.hpp"

using namespace svmtune;

TEST_CASE("build_grid") {
  const GridSpec unit = build_grid({1.0, 1.0});
  REQUIRE(unit.points.size() == 121);
  // gamma-major ordering: first 11 points share the smallest gamma
  for (std::size_t i = 0; i < 11; ++i) {
    CHECK(unit.points[i].gamma == 1e-5);
    CHECK(unit.points[i].c == kGridMultipliers[i]);
  }
  // the seed itself is on the grid
  CHECK(grid_contains(unit, {1.0, 1.0}));

  const GridSpec shifted = build_grid({1.0, 0.1});
  CHECK(shifted.points.front().gamma == 1e-5 * 0.1);
  CHECK(shifted.points.back().gamma == 1e5 * 0.1);
  CHECK(shifted.points.size() == 121);

  CHECK_THROWS_AS(build_grid({0.0, 1.0}), Error);
}

TEST_CASE("overall_accuracy") {
  const std::vector<int> truth{1, 0, 0};
  const std::vector<int> pred{1, 1, 0};
  CHECK(overall_accuracy(pred, truth) == Catch::Approx(200.0 / 3.0));
  CHECK(overall_accuracy(truth, truth) == 100.0);
  const std::vector<int> wrong{0, 1, 1};
  CHECK(overall_accuracy(wrong, truth) == 0.0);
  CHECK_THROWS_AS(overall_accuracy(pred, std::vector<int>{1}), Error);
  CHECK_THROWS_AS(overall_accuracy(std::vector<int>{}, std::vector<int>{}), Error);
}

TEST_CASE("average_accuracy") {
  const std::vector<int> truth{0, 0, 1};
  const std::vector<int> pred{0, 1, 1};
  CHECK(average_accuracy(pred, truth, 2) == 75.0);
  CHECK(average_accuracy(truth, truth, 2) == 100.0);
  // class 2 absent from the truth: mean over the two present classes only
  CHECK(average_accuracy(pred, truth, 3) == 75.0);
  CHECK_THROWS_AS(average_accuracy(pred, std::vector<int>{0}, 2), Error);
}

TEST_CASE("overall equals average accuracy on balanced symmetric confusion") {
  // balanced truth, equal per-class recall by construction
  const std::vector<int> truth{0, 0, 0, 0, 1, 1, 1, 1};
  const std::vector<int> pred{0, 0, 0, 1, 1, 1, 1, 0};
  CHECK(overall_accuracy(pred, truth) == average_accuracy(pred, truth, 2));
}

TEST_CASE("mww exact p-values") {
  const std::vector<double> low{1.0, 2.0, 3.0};
  const std::vector<double> high{4.0, 5.0, 6.0};

  // fully separated 3-vs-3: exactly one extreme assignment out of C(6,3)
  const MwwResult result = mww_one_sided(high, low, Direction::Greater);
  CHECK(result.p_value == Catch::Approx(0.05).epsilon(1e-12));
  CHECK_FALSE(result.significant);  // significance needs p < 0.05 strictly

  // symmetry: greater on (a, b) equals less on (b, a)
  const MwwResult mirrored = mww_one_sided(low, high, Direction::Less);
  CHECK(mirrored.p_value == result.p_value);

  // identical samples: no evidence; p >= 0.5
  const MwwResult same = mww_one_sided(low, low, Direction::Greater);
  CHECK(same.p_value >= 0.5);

  CHECK_THROWS_AS(mww_one_sided({}, low, Direction::Greater), Error);
}

TEST_CASE("mww exact path agrees with enumeration and recurrence oracles") {
  // all 3-vs-3 and 5-vs-5 splits of distinct integers
  for (std::size_t n_a : {3u, 5u}) {
    const std::size_t n = 2 * n_a;
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + n_a, true);
    std::sort(pick.begin(), pick.end());
    do {
      std::vector<double> a, b;
      for (std::size_t i = 0; i < n; ++i)
        (pick[i] ? a : b).push_back(static_cast<double>(i + 1));
      for (Direction dir : {Direction::Greater, Direction::Less}) {
        const bool greater = dir == Direction::Greater;
        const double mine = mww_exact_p(a, b, dir);
        CHECK(mine == Catch::Approx(oracle::mww_p_recurrence(a, b, greater))
                          .epsilon(1e-12));
        CHECK(mine == Catch::Approx(oracle::mww_p_enumerated(a, b, greater))
                          .epsilon(1e-12));
      }
    } while (std::next_permutation(pick.begin(), pick.end()));
  }
}

TEST_CASE("mww exact path handles ties like the enumeration oracle") {
  Rng rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> a, b;
    for (int i = 0; i < 4 + static_cast<int>(rng.below(3)); ++i)
      a.push_back(static_cast<double>(rng.below(4)));
    for (int i = 0; i < 4 + static_cast<int>(rng.below(3)); ++i)
      b.push_back(static_cast<double>(rng.below(4)));
    for (Direction dir : {Direction::Greater, Direction::Less}) {
      const bool greater = dir == Direction::Greater;
      CHECK(mww_exact_p(a, b, dir) ==
            Catch::Approx(oracle::mww_p_enumerated(a, b, greater)).epsilon(1e-12));
    }
  }
}

TEST_CASE("mww normal approximation tracks the exact path") {
  Rng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<double> a, b;
    for (int i = 0; i < 10; ++i) a.push_back(rng.unit() + 0.2 * rng.unit());
    for (int i = 0; i < 10; ++i) b.push_back(rng.unit());
    const double exact = mww_exact_p(a, b, Direction::Greater);
    const double approx = mww_normal_p(a, b, Direction::Greater);
    CHECK(std::abs(exact - approx) <= 0.02);
  }
}

TEST_CASE("mww picks the path by sample size") {
  std::vector<double> small(12, 0.0), large(13, 0.0);
  for (std::size_t i = 0; i < small.size(); ++i) small[i] = i * 1.0;
  for (std::size_t i = 0; i < large.size(); ++i) large[i] = i * 1.37 + 0.1;
  // both <= 12 -> exact
  const MwwResult exact = mww_one_sided(small, small, Direction::Greater);
  CHECK(exact.p_value ==
        Catch::Approx(mww_exact_p(small, small, Direction::Greater)));
  // one side > 12 -> normal approximation
  const MwwResult approx = mww_one_sided(large, small, Direction::Greater);
  CHECK(approx.p_value ==
        Catch::Approx(mww_normal_p(large, small, Direction::Greater)));
}

TEST_CASE("inner_cv_select returns the best point and breaks ties low") {
  // trivially separable blobs: many grid points reach identical accuracy
  const Dataset ds = testsupport::make_blobs(12, 2, 8.0, 5);
  GridSpec grid;
  grid.seed_params = {1.0, 1.0};
  grid.points = {{10.0, 0.5}, {1.0, 0.5}, {1.0, 0.1}, {10.0, 0.1}};
  const SvmParams chosen =
      inner_cv_select(ds.features, ds.labels, grid, 3, 7, {});
  CHECK(chosen.c == 1.0);
  CHECK(chosen.gamma == 0.1);

  GridSpec single;
  single.seed_params = {2.0, 0.3};
  single.points = {{2.0, 0.3}};
  const SvmParams only =
      inner_cv_select(ds.features, ds.labels, single, 3, 7, {});
  CHECK(only == SvmParams{2.0, 0.3});

  // stratification impossible: a class with fewer members than folds
  Dataset tiny = testsupport::make_blobs(2, 2, 8.0, 6);
  CHECK_THROWS_AS(inner_cv_select(tiny.features, tiny.labels, single, 3, 7, {}),
                  Error);
}

TEST_CASE("run_external_cv shape, logs and provenance") {
  const Dataset ds = testsupport::make_blobs(15, 2, 6.0, 11);
  CvConfig cv;
  cv.k_external = 5;
  cv.k_internal = 3;
  cv.repetitions = 3;
  cv.base_seed = 77;

  const RunScores heuristic =
      run_external_cv(ds, SelectionStrategy::heuristic(HeuristicId::Covtrace),
                      cv, {});
  REQUIRE(heuristic.per_repetition_oa.size() == 3);
  REQUIRE(heuristic.per_repetition_aa.size() == 3);
  REQUIRE(heuristic.fold_logs.size() == 15);
  CHECK(heuristic.mean_oa ==
        Catch::Approx((heuristic.per_repetition_oa[0] +
                       heuristic.per_repetition_oa[1] +
                       heuristic.per_repetition_oa[2]) / 3.0));
  for (const FoldLog& log : heuristic.fold_logs) {
    CHECK_FALSE(log.from_grid);
    CHECK(log.grid_points == 0);
    // heuristic params land off the default grid in general
    CHECK_FALSE(grid_contains(build_grid({1.0, 1.0}), log.chosen));
  }

  const RunScores gscv =
      run_external_cv(ds, SelectionStrategy::grid_default(), cv, {});
  for (const FoldLog& log : gscv.fold_logs) {
    CHECK(log.from_grid);
    CHECK(log.grid_points == 121);
    CHECK(grid_contains(build_grid({1.0, 1.0}), log.chosen));
  }

  // scaler instrumentation: the hash matches the training rows of the fold
  // plan reconstructed from the same seeds, for every fold
  for (int rep = 0; rep < cv.repetitions; ++rep) {
    const FoldPlan plan = stratified_kfold(ds.labels, cv.k_external,
                                           external_fold_seed(cv.base_seed, rep));
    for (int fold = 0; fold < cv.k_external; ++fold) {
      const FoldLog& log = heuristic.fold_logs[rep * cv.k_external + fold];
      CHECK(log.repetition == rep);
      CHECK(log.fold == fold);
      const auto train_idx = plan.complement_indices(fold);
      CHECK(log.scaler_rows_hash == detail::hash_indices(train_idx));
    }
  }
}

TEST_CASE("grid seeded at the default heuristic equals the default grid") {
  const Dataset ds = testsupport::make_blobs(9, 2, 2.5, 29);
  CvConfig cv;
  cv.repetitions = 2;
  cv.base_seed = 8;
  const RunScores plain =
      run_external_cv(ds, SelectionStrategy::grid_default(), cv, {});
  const RunScores seeded = run_external_cv(
      ds, SelectionStrategy::grid_seeded(HeuristicId::Default), cv, {});
  CHECK(plain.per_repetition_oa == seeded.per_repetition_oa);
  CHECK(plain.per_repetition_aa == seeded.per_repetition_aa);
  for (std::size_t i = 0; i < plain.fold_logs.size(); ++i)
    CHECK(plain.fold_logs[i].chosen == seeded.fold_logs[i].chosen);
}

TEST_CASE("default heuristic run equals fixed (1,1) everywhere") {
  const Dataset ds = testsupport::make_blobs(9, 2, 5.0, 13);
  CvConfig cv;
  cv.repetitions = 2;
  cv.base_seed = 5;
  const RunScores scores =
      run_external_cv(ds, SelectionStrategy::heuristic(HeuristicId::Default),
                      cv, {});
  for (const FoldLog& log : scores.fold_logs)
    CHECK(log.chosen == SvmParams{1.0, 1.0});
}

TEST_CASE("runs are reproducible bit for bit") {
  // loose clusters so accuracy does not saturate at 100
  const Dataset ds = testsupport::make_blobs(12, 3, 1.8, 17);
  CvConfig cv;
  cv.repetitions = 2;
  cv.base_seed = 123;
  const SelectionStrategy strategy =
      SelectionStrategy::heuristic(HeuristicId::Chapelle);
  const RunScores a = run_external_cv(ds, strategy, cv, {});
  const RunScores b = run_external_cv(ds, strategy, cv, {});
  REQUIRE(a.per_repetition_oa.size() == b.per_repetition_oa.size());
  for (std::size_t i = 0; i < a.per_repetition_oa.size(); ++i) {
    CHECK(std::memcmp(&a.per_repetition_oa[i], &b.per_repetition_oa[i],
                      sizeof(double)) == 0);
    CHECK(std::memcmp(&a.per_repetition_aa[i], &b.per_repetition_aa[i],
                      sizeof(double)) == 0);
  }
  CvConfig other = cv;
  other.base_seed = 124;
  const RunScores c = run_external_cv(ds, strategy, other, {});
  CHECK(a.per_repetition_oa != c.per_repetition_oa);
}

TEST_CASE("semi-supervised with fraction 1.0 reproduces the supervised run") {
  const Dataset ds = testsupport::make_blobs(12, 2, 4.0, 19);
  CvConfig cv;
  cv.repetitions = 2;
  cv.base_seed = 321;
  for (const SelectionStrategy& strategy :
       {SelectionStrategy::heuristic(HeuristicId::Covtrace),
        SelectionStrategy::grid_default()}) {
    const RunScores supervised = run_external_cv(ds, strategy, cv, {});
    const RunScores semi =
        run_semi_supervised(ds, strategy, cv, {1.0, 1}, {});
    REQUIRE(semi.per_repetition_oa.size() == supervised.per_repetition_oa.size());
    for (std::size_t i = 0; i < semi.per_repetition_oa.size(); ++i) {
      CHECK(std::memcmp(&semi.per_repetition_oa[i],
                        &supervised.per_repetition_oa[i], sizeof(double)) == 0);
      CHECK(std::memcmp(&semi.per_repetition_aa[i],
                        &supervised.per_repetition_aa[i], sizeof(double)) == 0);
    }
    for (std::size_t i = 0; i < semi.fold_logs.size(); ++i)
      CHECK(semi.fold_logs[i].chosen == supervised.fold_logs[i].chosen);
  }
}

TEST_CASE("semi-supervised subsets honour the per-class minimum") {
  const Dataset ds = testsupport::make_blobs(40, 2, 4.0, 23);
  CvConfig cv;
  cv.repetitions = 2;
  cv.base_seed = 11;
  const RunScores semi = run_semi_supervised(
      ds, SelectionStrategy::heuristic(HeuristicId::Covtrace), cv, {0.1, 5}, {});
  for (const FoldLog& log : semi.fold_logs) {
    REQUIRE(log.labeled_per_class.size() == 2);
    // training fold has 32 per class; 10% rounds up to 4 -> the minimum wins
    CHECK(log.labeled_per_class[0] == 5);
    CHECK(log.labeled_per_class[1] == 5);
  }

  // heuristic statistics on the full fold differ from the labelled subset:
  // the chosen gamma under covtrace must match the full-fold estimate
  const Scaler scaler = fit_scaler(ds.features);
  const Matrix z = transform(scaler, ds.features);
  const double full_gamma = covtrace_gamma(z);
  for (const FoldLog& log : semi.fold_logs)
    CHECK(std::abs(log.chosen.gamma - full_gamma) / full_gamma < 0.25);
}

TEST_CASE("compare_methods classifies verdicts") {
  RunScores reference;
  reference.per_repetition_oa = {70, 71, 72, 70, 71, 72, 70, 71, 72, 71};
  reference.per_repetition_aa = reference.per_repetition_oa;
  reference.mean_oa = detail::mean_of(reference.per_repetition_oa);
  reference.mean_aa = reference.mean_oa;

  RunScores better = reference;
  for (double& v : better.per_repetition_oa) v += 10.0;
  better.per_repetition_aa = better.per_repetition_oa;
  better.mean_oa += 10.0;
  better.mean_aa = better.mean_oa;

  RunScores same = reference;

  const ExperimentReport report = compare_methods(
      "blobs", "supervised",
      {{"gscv_default", reference}, {"boost", better}, {"copy", same}},
      "gscv_default");
  REQUIRE(report.comparisons.size() == 2);

  const MethodComparison& boost = report.comparisons[0];
  CHECK(boost.method == "boost");
  CHECK(boost.oa_verdict == Verdict::HigherSignificant);
  // 10 strictly dominating repetitions: p = 1 / C(20, 10)
  CHECK(boost.oa_greater.p_value ==
        Catch::Approx(1.0 / 184756.0).epsilon(1e-9));
  CHECK(boost.mean_oa_diff == Catch::Approx(10.0));

  const MethodComparison& copy = report.comparisons[1];
  CHECK(copy.oa_verdict == Verdict::NotSignificant);
  CHECK(copy.aa_verdict == Verdict::NotSignificant);

  RunScores short_run = reference;
  short_run.per_repetition_oa.pop_back();
  CHECK_THROWS_AS(compare_methods("blobs", "supervised",
                                  {{"gscv_default", reference},
                                   {"short", short_run}},
                                  "gscv_default"),
                  Error);
  CHECK_THROWS_AS(compare_methods("blobs", "supervised", {{"a", reference}},
                                  "missing"),
                  Error);
}
