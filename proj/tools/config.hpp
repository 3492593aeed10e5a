#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iterator>
#include <optional>
#include <string>
#include <type_traits>

#include <json.hpp>

#include "catana/core/error.hpp"
#include "catana/core/json_io.hpp"

namespace catana::cli {

struct PipelineConfig {
  std::optional<std::uint32_t> D;  // embedding dimension; unset accepts whatever the containers hold
  std::uint64_t f_min = 600;
  std::uint64_t f_max = 8000;
  double frames_per_minute = 10.0;
  std::size_t min_cluster_size = 5;
  std::size_t min_samples = 5;
  double p_filter = 0.5;
  std::size_t k_rep = 10;
  std::size_t link_min_cluster_size = 2;
  std::size_t link_min_samples = 2;
  int video_window_days = 12;
  int collab_window_days = 2;
  int effect_horizon_days = 6;
  double ci_level = 0.95;
  std::uint64_t rng_seed = 0;

  void validate() const {
    if (D && *D == 0) throw ContractError("config: D must be positive");
    if (f_min > f_max) throw ContractError("config: f_min exceeds f_max");
    if (!(frames_per_minute > 0)) throw ContractError("config: frames_per_minute must be positive");
    if (min_cluster_size < 2 || link_min_cluster_size < 2) throw ContractError("config: min_cluster_size must be >= 2");
    if (min_samples < 1 || link_min_samples < 1) throw ContractError("config: min_samples must be >= 1");
    if (p_filter < 0 || p_filter > 1) throw ContractError("config: p_filter outside [0, 1]");
    if (k_rep < 1) throw ContractError("config: k_rep must be >= 1");
    if (video_window_days < 2 || collab_window_days < 1 || effect_horizon_days < 1) {
      throw ContractError("config: window lengths must be positive (video window >= 2)");
    }
    if (ci_level != 0.95 && ci_level != 0.99) throw ContractError("config: ci_level must be 0.95 or 0.99");
  }
};

inline PipelineConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ContractError("config: top level must be an object");
  PipelineConfig c;
  auto get = [&](const std::string& key, auto& field) {
    if (!j.contains(key)) return;
    field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  try {
    for (const auto& [key, value] : j.items()) {
      static const char* known[] = {"D", "f_min", "f_max", "frames_per_minute", "min_cluster_size",
                                    "min_samples", "p_filter", "k_rep", "link_min_cluster_size",
                                    "link_min_samples", "video_window_days", "collab_window_days",
                                    "effect_horizon_days", "ci_level", "rng_seed"};
      if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
        throw ContractError("config: unknown key '" + key + "'");
      }
    }
    if (j.contains("D") && !j["D"].is_null()) c.D = j["D"].get<std::uint32_t>();
    get("f_min", c.f_min);
    get("f_max", c.f_max);
    get("frames_per_minute", c.frames_per_minute);
    get("min_cluster_size", c.min_cluster_size);
    get("min_samples", c.min_samples);
    get("p_filter", c.p_filter);
    get("k_rep", c.k_rep);
    get("link_min_cluster_size", c.link_min_cluster_size);
    get("link_min_samples", c.link_min_samples);
    get("video_window_days", c.video_window_days);
    get("collab_window_days", c.collab_window_days);
    get("effect_horizon_days", c.effect_horizon_days);
    get("ci_level", c.ci_level);
    get("rng_seed", c.rng_seed);
  } catch (const json::exception& e) {
    throw ContractError(std::string("config: ") + e.what());
  }
  return c;
}

inline PipelineConfig load_config(const std::filesystem::path& path) { return config_from_json(read_json_file(path)); }

}  // namespace catana::cli
