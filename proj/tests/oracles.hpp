#pragma once

// Reference implementations written independently of the library, used to
// check it on random inputs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

// Minimum accumulated |a_i - b_j| over every monotone warping path, by
// depth-first enumeration of all paths from (0,0) to (n-1,m-1).
inline double dtw_bruteforce(const std::vector<double>& a, const std::vector<double>& b) {
  const int n = static_cast<int>(a.size()), m = static_cast<int>(b.size());
  double best = std::numeric_limits<double>::infinity();
  std::function<void(int, int, double)> walk = [&](int i, int j, double acc) {
    acc += std::fabs(a[i] - b[j]);
    if (i == n - 1 && j == m - 1) {
      best = std::min(best, acc);
      return;
    }
    if (i + 1 < n) walk(i + 1, j, acc);
    if (j + 1 < m) walk(i, j + 1, acc);
    if (i + 1 < n && j + 1 < m) walk(i + 1, j + 1, acc);
  };
  walk(0, 0, 0.0);
  return best;
}

// Quantile of an unsorted sample: sort a copy, then interpolate between the
// floor and ceiling ranks of q * (n - 1).
inline double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

// Hilbert curve as (x, y) points, built by recursive substitution: the
// previous order is copied into the four quadrants, the first transposed and
// the last anti-transposed.
inline std::vector<std::pair<int, int>> hilbert_recursive(int order) {
  std::vector<std::pair<int, int>> curve{{0, 0}};
  for (int k = 0; k < order; ++k) {
    const int m = 1 << k;
    std::vector<std::pair<int, int>> next;
    next.reserve(curve.size() * 4);
    for (auto [x, y] : curve) next.push_back({y, x});
    for (auto [x, y] : curve) next.push_back({x, y + m});
    for (auto [x, y] : curve) next.push_back({x + m, y + m});
    for (auto [x, y] : curve) next.push_back({2 * m - 1 - y, m - 1 - x});
    curve = std::move(next);
  }
  return curve;
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0 || sbb == 0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

// Test-side randomness, deliberately a different generator from the library's.
inline std::vector<double> random_values(std::mt19937_64& gen, int n, double lo = 0.0, double hi = 100.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = d(gen);
  return v;
}

}  // namespace oracle
