#pragma once

// Umbrella header.

#include "svmtune/cross_validation.hpp"
#include "svmtune/csv.hpp"
#include "svmtune/dataset.hpp"
#include "svmtune/error.hpp"
#include "svmtune/experiment.hpp"
#include "svmtune/folds.hpp"
#include "svmtune/grid.hpp"
#include "svmtune/heuristics.hpp"
#include "svmtune/keel.hpp"
#include "svmtune/kernel.hpp"
#include "svmtune/matrix.hpp"
#include "svmtune/metrics.hpp"
#include "svmtune/mww.hpp"
#include "svmtune/report.hpp"
#include "svmtune/rng.hpp"
#include "svmtune/scaler.hpp"
#include "svmtune/svm.hpp"
