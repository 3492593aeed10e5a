#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "catana/cluster/distance.hpp"
#include "catana/core/error.hpp"
#include "catana/util/random.hpp"

namespace catana::synth {

// Centers whose pairwise distance is at least min_separation, drawn from an
// isotropic Gaussian and rejected until the constraint holds.
inline std::vector<std::vector<double>> separated_centers(Rng& rng, std::size_t count, std::size_t dim,
                                                          double min_separation) {
  const double spread = 1.25 * min_separation / std::sqrt(2.0 * static_cast<double>(dim));
  std::vector<std::vector<double>> centers;
  std::size_t attempts = 0;
  while (centers.size() < count) {
    if (++attempts > 100000) throw ContractError("cannot place separated centers");
    std::vector<double> c(dim);
    for (double& x : c) x = rng.normal(0.0, spread * std::max(1.0, std::sqrt(static_cast<double>(count))));
    bool ok = true;
    for (const auto& other : centers) {
      if (cluster::euclidean(c, other) < min_separation) {
        ok = false;
        break;
      }
    }
    if (ok) centers.push_back(std::move(c));
  }
  return centers;
}

struct LabelledPoints {
  cluster::PointSet points;
  std::vector<int> truth;
};

// `count` isotropic Gaussian blobs of `per_blob` points, sigma per coordinate,
// centers at least separation * sigma apart. Points are interleaved by blob.
inline LabelledPoints gaussian_blobs(Rng& rng, std::size_t count, std::size_t per_blob, std::size_t dim,
                                     double sigma, double separation) {
  const auto centers = separated_centers(rng, count, dim, separation * sigma);
  LabelledPoints out{cluster::PointSet(dim), {}};
  std::vector<double> p(dim);
  for (std::size_t i = 0; i < per_blob; ++i) {
    for (std::size_t b = 0; b < count; ++b) {
      for (std::size_t d = 0; d < dim; ++d) p[d] = centers[b][d] + rng.normal(0.0, sigma);
      out.points.push_back(std::span<const double>(p));
      out.truth.push_back(static_cast<int>(b));
    }
  }
  return out;
}

// Adjusted Rand index between two labelings, every label value (including
// -1) treated as its own group. Two single-group labelings score 1.
inline double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) throw ContractError("labelings differ in length");
  const double n = static_cast<double>(a.size());
  if (a.size() < 2) return 1.0;
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> rows, cols;
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[{a[i], b[i]}] += 1;
    rows[a[i]] += 1;
    cols[b[i]] += 1;
  }
  auto pairs = [](double x) { return x * (x - 1) / 2.0; };
  double index = 0, sum_rows = 0, sum_cols = 0;
  for (const auto& [k, v] : joint) index += pairs(v);
  for (const auto& [k, v] : rows) sum_rows += pairs(v);
  for (const auto& [k, v] : cols) sum_cols += pairs(v);
  const double expected = sum_rows * sum_cols / pairs(n);
  const double max_index = (sum_rows + sum_cols) / 2.0;
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

}  // namespace catana::synth
