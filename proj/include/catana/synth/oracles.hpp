#pragma once

// Slow reference implementations used to check the cluster engine. They share
// no code with catana/cluster beyond the DistanceSource concept.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "catana/cluster/distance.hpp"
#include "catana/core/error.hpp"

namespace catana::synth {

// DBSCAN straight from the definitions: explicit neighbour sets, core
// predicate, density-connectivity by transitive closure over core points
// (Floyd-Warshall style, O(n^3)). Clusters are ordered by their lowest core
// index; a border point joins the lowest-ordered cluster among its core
// neighbours. Noise is -1.
template <cluster::DistanceSource D>
std::vector<int> brute_force_dbscan(const D& dist, double eps, std::size_t min_pts) {
  const std::size_t n = dist.size();
  if (n > 256) throw ContractError("brute_force_dbscan is limited to 256 points");

  std::vector<std::vector<bool>> neighbour(n, std::vector<bool>(n, false));
  std::vector<bool> core(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t count = 0;
    for (std::size_t j = 0; j < n; ++j) {
      neighbour[i][j] = dist.distance(i, j) <= eps;
      count += neighbour[i][j] ? 1 : 0;
    }
    core[i] = count >= min_pts;
  }

  // reach[i][j]: core i and core j are density-connected.
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) reach[i][j] = core[i] && core[j] && neighbour[i][j];
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!reach[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (reach[k][j]) reach[i][j] = true;
      }
    }
  }

  // Representative = lowest core index in the connectivity class.
  constexpr auto kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> rep(n, kNone);
  for (std::size_t i = 0; i < n; ++i) {
    if (!core[i]) continue;
    for (std::size_t j = 0; j <= i; ++j) {
      if (reach[i][j] || i == j) {
        rep[i] = j;
        break;
      }
    }
  }
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i] && rep[i] == i) reps.push_back(i);
  }
  auto cluster_of_rep = [&](std::size_t r) {
    return static_cast<int>(std::find(reps.begin(), reps.end(), r) - reps.begin());
  };

  std::vector<int> labels(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i]) {
      labels[i] = cluster_of_rep(rep[i]);
      continue;
    }
    std::size_t best = kNone;
    for (std::size_t j = 0; j < n; ++j) {
      if (core[j] && neighbour[i][j]) best = std::min(best, rep[j]);
    }
    if (best != kNone) labels[i] = cluster_of_rep(best);
  }
  return labels;
}

// Minimum total weight over every labelled spanning tree of the complete
// graph, enumerated through Pruefer sequences (n^(n-2) trees). n <= 9.
inline double exhaustive_min_spanning_weight(const std::vector<std::vector<double>>& w) {
  const std::size_t n = w.size();
  if (n > 9) throw ContractError("exhaustive spanning-tree enumeration is limited to 9 nodes");
  if (n < 2) return 0.0;
  if (n == 2) return w[0][1];

  const std::size_t len = n - 2;
  std::vector<std::size_t> seq(len, 0);
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> degree(n);
  while (true) {
    std::fill(degree.begin(), degree.end(), 1);
    for (std::size_t s : seq) ++degree[s];
    double total = 0.0;
    for (std::size_t s : seq) {
      std::size_t leaf = 0;
      while (degree[leaf] != 1) ++leaf;
      total += w[leaf][s];
      --degree[leaf];
      --degree[s];
    }
    std::size_t u = n, v = n;
    for (std::size_t x = 0; x < n; ++x) {
      if (degree[x] == 1) (u == n ? u : v) = x;
    }
    total += w[u][v];
    best = std::min(best, total);

    std::size_t pos = 0;
    while (pos < len && ++seq[pos] == n) seq[pos++] = 0;
    if (pos == len) break;
  }
  return best;
}

// Components by union-find with path halving; the largest wins, ties to the
// component whose smallest member sorts first.
inline std::set<std::string> union_find_largest_component(const std::set<std::string>& nodes,
                                                          const std::vector<std::pair<std::string, std::string>>& edges) {
  std::vector<std::string> names(nodes.begin(), nodes.end());
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < names.size(); ++i) index[names[i]] = i;
  std::vector<std::size_t> parent(names.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [a, b] : edges) {
    const auto ra = find(index.at(a)), rb = find(index.at(b));
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  std::map<std::size_t, std::set<std::string>> comps;
  for (std::size_t i = 0; i < names.size(); ++i) comps[find(i)].insert(names[i]);
  std::set<std::string> best;
  std::string best_min;
  for (const auto& [root, members] : comps) {
    if (members.size() > best.size() || (members.size() == best.size() && *members.begin() < best_min)) {
      best = members;
      best_min = *members.begin();
    }
  }
  return best;
}

}  // namespace catana::synth
