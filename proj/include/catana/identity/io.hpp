#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "catana/core/embedding_container.hpp"
#include "catana/core/error.hpp"
#include "catana/identity/face_cluster.hpp"
#include "catana/identity/identity.hpp"

namespace catana::identity {

using nlohmann::json;

inline std::uint64_t offset_of(std::size_t index, std::uint32_t dim) {
  return kEmbeddingHeaderSize + index * (4 + std::uint64_t{dim} * 4);
}

inline std::size_t index_of(std::uint64_t offset, std::uint32_t dim) {
  const std::uint64_t stride = 4 + std::uint64_t{dim} * 4;
  if (offset < kEmbeddingHeaderSize || (offset - kEmbeddingHeaderSize) % stride != 0) {
    throw ContractError("offset " + std::to_string(offset) + " is not a record boundary");
  }
  return static_cast<std::size_t>((offset - kEmbeddingHeaderSize) / stride);
}

// Members and representatives are written as byte offsets into the video's
// embedding container; `dim` is the container's D.
inline json cluster_to_json(const FaceCluster& c, std::uint32_t dim) {
  std::vector<std::uint64_t> members, reps;
  for (auto i : c.members) members.push_back(offset_of(i, dim));
  for (auto i : c.representatives) reps.push_back(offset_of(i, dim));
  return json{{"cluster_id", c.cluster_id},
              {"video_id", c.video_id},
              {"algorithm", to_string(c.algorithm)},
              {"dim", dim},
              {"members", members},
              {"probabilities", c.probabilities},
              {"representatives", reps},
              {"centroid", c.centroid},
              {"appearance_weight", c.appearance_weight}};
}

inline FaceCluster cluster_from_json(const json& j) {
  FaceCluster c;
  try {
    c.cluster_id = j.at("cluster_id").get<std::string>();
    c.video_id = j.at("video_id").get<std::string>();
    const auto algo = j.at("algorithm").get<std::string>();
    if (algo == "hdbscan") {
      c.algorithm = ClusterAlgorithm::hdbscan;
    } else if (algo == "dbscan") {
      c.algorithm = ClusterAlgorithm::dbscan;
    } else {
      throw ContractError("unknown algorithm '" + algo + "'");
    }
    const auto dim = j.at("dim").get<std::uint32_t>();
    for (auto off : j.at("members").get<std::vector<std::uint64_t>>()) c.members.push_back(index_of(off, dim));
    c.probabilities = j.at("probabilities").get<std::vector<double>>();
    for (auto off : j.at("representatives").get<std::vector<std::uint64_t>>()) {
      c.representatives.push_back(index_of(off, dim));
    }
    c.centroid = j.at("centroid").get<std::vector<double>>();
    c.appearance_weight = j.at("appearance_weight").get<std::size_t>();
  } catch (const json::exception& e) {
    throw ContractError(std::string("malformed face cluster: ") + e.what());
  }
  if (c.probabilities.size() != c.members.size()) throw ContractError("cluster " + c.cluster_id + ": probabilities do not match members");
  if (c.centroid.empty()) throw ContractError("cluster " + c.cluster_id + ": empty centroid");
  return c;
}

inline json identity_to_json(const Identity& p) {
  return json{{"identity_id", p.identity_id},
              {"creator_channel", p.creator_channel},
              {"clusters", p.clusters},
              {"videos", p.videos},
              {"appearances", p.appearances}};
}

inline Identity identity_from_json(const json& j) {
  Identity p;
  try {
    p.identity_id = j.at("identity_id").get<std::string>();
    p.creator_channel = j.at("creator_channel").get<std::string>();
    p.clusters = j.at("clusters").get<std::vector<std::string>>();
    p.videos = j.at("videos").get<std::vector<std::string>>();
    p.appearances = j.at("appearances").get<std::map<std::string, std::size_t>>();
  } catch (const json::exception& e) {
    throw ContractError(std::string("malformed identity: ") + e.what());
  }
  return p;
}

}  // namespace catana::identity
