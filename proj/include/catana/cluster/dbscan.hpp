#pragma once

#include <cstddef>
#include <deque>
#include <vector>

#include "catana/cluster/distance.hpp"
#include "catana/cluster/result.hpp"
#include "catana/core/error.hpp"

namespace catana::cluster {

namespace detail {

template <DistanceSource D>
std::vector<std::size_t> region_query(const D& dist, std::size_t p, double eps) {
  std::vector<std::size_t> out;
  for (std::size_t q = 0; q < dist.size(); ++q) {
    if (dist.distance(p, q) <= eps) out.push_back(q);
  }
  return out;
}

}  // namespace detail

// Classic DBSCAN. Neighbourhoods are closed balls (d <= eps) and include the
// point itself. Clusters are seeded in index order; a border point reachable
// from several clusters belongs to the first one that reaches it.
template <DistanceSource D>
ClusterResult dbscan(const D& dist, double eps, std::size_t min_pts) {
  if (!(eps >= 0.0)) throw ContractError("dbscan: eps must be non-negative");
  if (min_pts < 1) throw ContractError("dbscan: min_pts must be positive");

  constexpr int kUnvisited = -2;
  const std::size_t n = dist.size();
  ClusterResult result;
  result.labels.assign(n, kUnvisited);
  int cluster = 0;

  for (std::size_t i = 0; i < n; ++i) {
    if (result.labels[i] != kUnvisited) continue;
    auto seeds = detail::region_query(dist, i, eps);
    if (seeds.size() < min_pts) {
      result.labels[i] = kNoise;
      continue;
    }
    result.labels[i] = cluster;
    std::deque<std::size_t> queue(seeds.begin(), seeds.end());
    while (!queue.empty()) {
      const std::size_t q = queue.front();
      queue.pop_front();
      if (result.labels[q] == kNoise) result.labels[q] = cluster;  // border point
      if (result.labels[q] != kUnvisited) continue;
      result.labels[q] = cluster;
      auto more = detail::region_query(dist, q, eps);
      if (more.size() >= min_pts) queue.insert(queue.end(), more.begin(), more.end());
    }
    ++cluster;
  }

  result.probabilities.resize(n);
  for (std::size_t i = 0; i < n; ++i) result.probabilities[i] = result.labels[i] == kNoise ? 0.0 : 1.0;
  result.stabilities.assign(static_cast<std::size_t>(cluster), 0.0);
  return result;
}

}  // namespace catana::cluster
