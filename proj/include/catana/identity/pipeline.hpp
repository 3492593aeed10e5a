#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "catana/core/embedding_container.hpp"
#include "catana/core/types.hpp"
#include "catana/identity/face_cluster.hpp"
#include "catana/identity/identity.hpp"
#include "catana/util/parallel.hpp"

namespace catana::identity {

// Returns nullopt when the video has no container.
using EmbeddingLoader = std::function<std::optional<EmbeddingFile>(const std::string& video_id)>;

inline EmbeddingLoader directory_loader(const std::filesystem::path& dir) {
  return [dir](const std::string& video_id) -> std::optional<EmbeddingFile> {
    const auto path = dir / (video_id + ".ctem");
    if (!std::filesystem::exists(path)) return std::nullopt;
    return read_embeddings(path);
  };
}

struct CorpusClusters {
  std::vector<FaceCluster> clusters;  // in video order
  std::vector<std::string> missing;   // videos without an embedding file
};

// Clusters every video independently. Videos whose container is absent are
// listed in `missing`; any other read error propagates.
inline CorpusClusters cluster_corpus(const std::vector<VideoRecord>& videos, const EmbeddingLoader& load,
                                     const VideoClusterParams& params, std::size_t threads = 1) {
  std::vector<std::vector<FaceCluster>> per_video(videos.size());
  std::vector<char> absent(videos.size(), 0);
  parallel_for(videos.size(), threads, [&](std::size_t i) {
    const auto file = load(videos[i].video_id);
    if (!file) {
      absent[i] = 1;
      return;
    }
    const auto obs = to_observations(videos[i].video_id, *file);
    per_video[i] = cluster_video(obs, params);
  });
  CorpusClusters out;
  for (std::size_t i = 0; i < videos.size(); ++i) {
    if (absent[i]) out.missing.push_back(videos[i].video_id);
    for (auto& c : per_video[i]) out.clusters.push_back(std::move(c));
  }
  return out;
}

inline EmbeddingLoader memory_loader(const std::map<std::string, EmbeddingFile>& files) {
  return [&files](const std::string& video_id) -> std::optional<EmbeddingFile> {
    const auto it = files.find(video_id);
    if (it == files.end()) return std::nullopt;
    return it->second;
  };
}

}  // namespace catana::identity
