#pragma once

#include <array>
#include <vector>

#include "svmtune/heuristics.hpp"

// The multiplicative 11 x 11 search grid centred on a seed point: each
// parameter is scaled by every power of ten from 1e-5 to 1e5.

namespace svmtune {

inline constexpr std::array<double, 11> kGridMultipliers = {
    1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1e0, 1e1, 1e2, 1e3, 1e4, 1e5};

struct GridSpec {
  SvmParams seed_params;
  std::array<double, 11> multipliers = kGridMultipliers;
  std::vector<SvmParams> points;  // gamma-major, ascending multipliers
};

inline GridSpec build_grid(SvmParams seed_params) {
  if (!(seed_params.c > 0.0) || !(seed_params.gamma > 0.0))
    fail("E_INVALID", "grid seed must be positive");
  GridSpec grid;
  grid.seed_params = seed_params;
  grid.points.reserve(grid.multipliers.size() * grid.multipliers.size());
  for (double rg : grid.multipliers)
    for (double rc : grid.multipliers)
      grid.points.push_back({rc * seed_params.c, rg * seed_params.gamma});
  return grid;
}

inline bool grid_contains(const GridSpec& grid, SvmParams params) {
  for (const SvmParams& p : grid.points)
    if (p == params) return true;
  return false;
}

}  // namespace svmtune
