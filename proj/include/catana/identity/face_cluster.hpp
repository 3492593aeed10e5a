#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "catana/cluster/dbscan.hpp"
#include "catana/cluster/hdbscan.hpp"
#include "catana/core/types.hpp"

namespace catana::identity {

enum class ClusterAlgorithm { hdbscan, dbscan };

inline const char* to_string(ClusterAlgorithm a) { return a == ClusterAlgorithm::hdbscan ? "hdbscan" : "dbscan"; }

struct VideoClusterParams {
  std::size_t min_cluster_size = 5;
  std::size_t min_samples = 5;
  double p_filter = 0.5;  // members below this membership probability are dropped
  std::size_t k_rep = 10;
};

// One apparent person inside one video. Member and representative indices
// refer to positions in that video's observation list (container records).
struct FaceCluster {
  std::string cluster_id;
  std::string video_id;
  ClusterAlgorithm algorithm = ClusterAlgorithm::hdbscan;
  std::vector<std::size_t> members;
  std::vector<double> probabilities;  // parallel to members
  std::vector<std::size_t> representatives;
  std::vector<double> centroid;
  std::size_t appearance_weight = 0;  // member count

  bool operator==(const FaceCluster&) const = default;
};

struct Representatives {
  std::vector<std::size_t> indices;
  std::vector<double> centroid;
};

inline std::vector<double> centroid_of(std::span<const FaceObservation> obs,
                                       std::span<const std::size_t> members) {
  if (members.empty()) return {};
  std::vector<double> c(obs[members.front()].embedding.size(), 0.0);
  for (std::size_t m : members) {
    const auto& e = obs[m].embedding;
    for (std::size_t d = 0; d < c.size(); ++d) c[d] += e[d];
  }
  for (double& x : c) x /= static_cast<double>(members.size());
  return c;
}

// The k_rep members with the highest membership probability (ties go to the
// lower frame index), plus the centroid of all members.
inline Representatives select_representatives(const FaceCluster& cluster,
                                              std::span<const FaceObservation> obs, std::size_t k_rep) {
  if (cluster.members.empty()) throw ContractError("select_representatives: empty cluster");
  std::vector<std::size_t> order(cluster.members.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (cluster.probabilities[a] != cluster.probabilities[b]) {
      return cluster.probabilities[a] > cluster.probabilities[b];
    }
    return obs[cluster.members[a]].frame_index < obs[cluster.members[b]].frame_index;
  });
  order.resize(std::min(k_rep, order.size()));
  Representatives rep;
  for (std::size_t k : order) rep.indices.push_back(cluster.members[k]);
  rep.centroid = centroid_of(obs, cluster.members);
  return rep;
}

inline cluster::PointSet to_point_set(std::span<const FaceObservation> obs) {
  cluster::PointSet pts(obs.empty() ? 0 : obs.front().embedding.size());
  for (const auto& o : obs) pts.push_back(std::span<const float>(o.embedding));
  return pts;
}

// Clusters one video's faces: HDBSCAN first, DBSCAN when HDBSCAN finds no
// cluster at all. Fallback eps is the median min_samples-th neighbour
// distance. Low-probability members are filtered, then clusters smaller than
// min_cluster_size are discarded.
inline std::vector<FaceCluster> cluster_video(std::span<const FaceObservation> obs,
                                              const VideoClusterParams& params) {
  std::vector<FaceCluster> out;
  if (obs.empty()) return out;
  const auto pts = to_point_set(obs);
  const cluster::EuclideanDistance dist(pts);

  auto result = cluster::hdbscan(dist, params.min_cluster_size, params.min_samples);
  auto algorithm = ClusterAlgorithm::hdbscan;
  if (result.cluster_count() == 0 && obs.size() >= params.min_cluster_size) {
    auto core = cluster::core_distances(dist, std::min(params.min_samples, obs.size()));
    std::nth_element(core.begin(), core.begin() + static_cast<std::ptrdiff_t>(core.size() / 2), core.end());
    double eps = core[core.size() / 2];
    if (core.size() % 2 == 0) {
      eps = (eps + *std::max_element(core.begin(), core.begin() + static_cast<std::ptrdiff_t>(core.size() / 2))) / 2.0;
    }
    result = cluster::dbscan(dist, eps, params.min_samples);
    algorithm = ClusterAlgorithm::dbscan;
  }

  std::vector<FaceCluster> by_label(result.cluster_count());
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const int label = result.labels[i];
    if (label == cluster::kNoise || result.probabilities[i] < params.p_filter) continue;
    auto& c = by_label[static_cast<std::size_t>(label)];
    c.members.push_back(i);
    c.probabilities.push_back(result.probabilities[i]);
  }
  for (auto& c : by_label) {
    if (c.members.size() < params.min_cluster_size) continue;
    c.video_id = obs.front().video_id;
    c.cluster_id = c.video_id + "#" + std::to_string(out.size());
    c.algorithm = algorithm;
    c.appearance_weight = c.members.size();
    auto rep = select_representatives(c, obs, params.k_rep);
    c.representatives = std::move(rep.indices);
    c.centroid = std::move(rep.centroid);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace catana::identity
