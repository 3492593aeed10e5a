#pragma once

#include <cstddef>
#include <unordered_map>
#include <vector>

namespace catana::cluster {

inline constexpr int kNoise = -1;

struct ClusterParams {
  double eps = 0.5;                   // DBSCAN radius
  std::size_t min_pts = 5;            // DBSCAN density threshold, point counts itself
  std::size_t min_cluster_size = 5;   // HDBSCAN
  std::size_t min_samples = 5;        // HDBSCAN core-distance k, point counts itself
  bool allow_single_cluster = false;  // HDBSCAN: may the hierarchy root be selected
};

struct ClusterResult {
  std::vector<int> labels;            // kNoise or 0..cluster_count-1
  std::vector<double> probabilities;  // 0 exactly for noise
  std::vector<double> stabilities;    // per cluster; DBSCAN reports 0

  std::size_t cluster_count() const { return stabilities.size(); }
};

// Renumbers non-noise labels by order of first appearance.
inline std::vector<int> canonical_labels(const std::vector<int>& labels) {
  std::unordered_map<int, int> map;
  std::vector<int> out;
  out.reserve(labels.size());
  for (int l : labels) {
    if (l == kNoise) {
      out.push_back(kNoise);
      continue;
    }
    auto [it, inserted] = map.try_emplace(l, static_cast<int>(map.size()));
    out.push_back(it->second);
  }
  return out;
}

}  // namespace catana::cluster
