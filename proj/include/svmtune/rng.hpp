#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>
#include <vector>

// Deterministic seeding and sampling. Shuffles and index draws are
// hand-rolled on top of std::mt19937_64 so that results do not depend on a
// particular standard library's distribution implementations.

namespace svmtune {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Folds a base seed and a sequence of salts into one well-mixed stream seed.
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> salts) {
  std::uint64_t s = splitmix64(base);
  for (std::uint64_t v : salts) s = splitmix64(s ^ splitmix64(v));
  return s;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound) without modulo bias; bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t reject_above = max - max % bound - 1;
    std::uint64_t v = next();
    while (v > reject_above) v = next();
    return v % bound;
  }

  // Uniform in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller (polar form avoided to keep the draw
  // count per call fixed at two).
  double normal() {
    double u1 = unit();
    while (u1 == 0.0) u1 = unit();
    const double u2 = unit();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // k distinct values from [0, n), k <= n, returned in ascending order
  // (Floyd's sampling).
  std::vector<std::uint64_t> sample_indices(std::uint64_t n, std::uint64_t k);

 private:
  std::mt19937_64 engine_;
};

inline std::vector<std::uint64_t> Rng::sample_indices(std::uint64_t n,
                                                      std::uint64_t k) {
  std::vector<std::uint64_t> chosen;
  chosen.reserve(k);
  auto contains = [&](std::uint64_t v) {
    for (std::uint64_t c : chosen)
      if (c == v) return true;
    return false;
  };
  for (std::uint64_t j = n - k; j < n; ++j) {
    const std::uint64_t t = below(j + 1);
    chosen.push_back(contains(t) ? j : t);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace svmtune
