#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "catana/cluster/distance.hpp"
#include "catana/cluster/hdbscan.hpp"
#include "catana/core/error.hpp"
#include "catana/core/types.hpp"
#include "catana/identity/face_cluster.hpp"

namespace catana::identity {

using VideoCatalogue = std::unordered_map<std::string, VideoRecord>;

inline VideoCatalogue make_catalogue(std::span<const VideoRecord> videos) {
  VideoCatalogue cat;
  for (const auto& v : videos) cat.emplace(v.video_id, v);
  return cat;
}

// A person across videos.
struct Identity {
  std::string identity_id;
  std::vector<std::string> clusters;              // member face cluster ids
  std::vector<std::string> videos;                // distinct, sorted
  std::map<std::string, std::size_t> appearances; // channel -> distinct videos
  std::string creator_channel;

  bool operator==(const Identity&) const = default;
};

struct LinkParams {
  std::size_t min_cluster_size = 2;
  std::size_t min_samples = 2;
  bool allow_single_cluster = true;
};

// Centroid-to-centroid Euclidean distances between face clusters.
inline cluster::DistanceMatrix centroid_distances(std::span<const FaceCluster> clusters) {
  const std::size_t n = clusters.size();
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (clusters[i].centroid.size() != clusters.front().centroid.size()) {
      throw ContractError("face cluster " + clusters[i].cluster_id + " has a different dimension");
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      v[i * n + j] = v[j * n + i] = cluster::euclidean(clusters[i].centroid, clusters[j].centroid);
    }
  }
  return cluster::DistanceMatrix(std::move(v), n);
}

// Partition of face-cluster indices into people. HDBSCAN runs on the
// precomputed centroid distances; noise clusters become singleton groups.
inline std::vector<std::vector<std::size_t>> group_face_clusters(std::span<const FaceCluster> clusters,
                                                                 const LinkParams& params) {
  std::vector<std::vector<std::size_t>> groups;
  if (clusters.empty()) return groups;
  const auto result = cluster::hdbscan(centroid_distances(clusters), params.min_cluster_size,
                                       params.min_samples, params.allow_single_cluster);
  std::vector<std::vector<std::size_t>> by_label(result.cluster_count());
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    const int label = result.labels[i];
    if (label == cluster::kNoise) {
      groups.push_back({i});
    } else {
      by_label[static_cast<std::size_t>(label)].push_back(i);
    }
  }
  for (auto& g : by_label) groups.push_back(std::move(g));
  std::sort(groups.begin(), groups.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return groups;
}

// Appearances are distinct videos per channel. The argmax wins; ties go to
// the channel with the earliest first-appearance upload date, then to the
// lexicographically smallest channel id.
inline std::string assign_creator(const Identity& person, const VideoCatalogue& videos) {
  if (person.appearances.empty()) throw ContractError("identity " + person.identity_id + " has no appearances");
  std::map<std::string, Date> first_seen;
  for (const auto& vid : person.videos) {
    const auto it = videos.find(vid);
    if (it == videos.end()) throw ContractError("unknown video " + vid);
    auto [pos, inserted] = first_seen.try_emplace(it->second.channel_id, it->second.upload_date);
    if (!inserted) pos->second = std::min(pos->second, it->second.upload_date);
  }
  const std::string* best = nullptr;
  std::size_t best_count = 0;
  for (const auto& [channel, count] : person.appearances) {
    if (!best || count > best_count) {
      best = &channel;
      best_count = count;
      continue;
    }
    if (count < best_count) continue;
    const auto a = first_seen.find(channel);
    const auto b = first_seen.find(*best);
    if (a != first_seen.end() && b != first_seen.end() && a->second < b->second) best = &channel;
  }
  return *best;
}

inline void fill_appearances(Identity& person, std::span<const FaceCluster> clusters,
                             std::span<const std::size_t> members, const VideoCatalogue& videos) {
  std::set<std::string> vids;
  for (std::size_t m : members) {
    person.clusters.push_back(clusters[m].cluster_id);
    vids.insert(clusters[m].video_id);
  }
  person.videos.assign(vids.begin(), vids.end());
  person.appearances.clear();
  for (const auto& vid : person.videos) {
    const auto it = videos.find(vid);
    if (it == videos.end()) throw ContractError("face cluster references unknown video " + vid);
    ++person.appearances[it->second.channel_id];
  }
}

// Groups face clusters into identities and assigns each a creator channel.
// Every face cluster ends up in exactly one identity.
inline std::vector<Identity> link_identities(std::span<const FaceCluster> clusters, const VideoCatalogue& videos,
                                             const LinkParams& params = {}) {
  std::vector<Identity> out;
  const auto groups = group_face_clusters(clusters, params);
  out.reserve(groups.size());
  for (const auto& g : groups) {
    Identity person;
    person.identity_id = "identity-" + std::to_string(out.size());
    fill_appearances(person, clusters, g, videos);
    person.creator_channel = assign_creator(person, videos);
    out.push_back(std::move(person));
  }
  return out;
}

}  // namespace catana::identity
