#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "catana/core/error.hpp"

namespace catana {

// Percentile by linear interpolation between closest ranks over a sorted
// sample: position (n - 1) * q.
inline double percentile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw ContractError("percentile of an empty sample");
  const double pos = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

inline double mean_of(std::span<const double> xs) {
  if (xs.empty()) throw ContractError("mean of an empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

// Sample standard deviation (n - 1 denominator); two-pass for stability.
inline double sample_sd(std::span<const double> xs) {
  if (xs.size() < 2) throw ContractError("standard deviation needs at least 2 samples");
  const double m = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace catana
