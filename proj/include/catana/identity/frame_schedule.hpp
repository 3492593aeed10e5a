#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "catana/core/error.hpp"

namespace catana::identity {

struct FrameScheduleConfig {
  double frames_per_minute = 10.0;
  std::uint64_t f_min = 600;
  std::uint64_t f_max = 8000;
};

struct FrameSchedule {
  std::string video_id;
  std::uint64_t n = 0;  // total frames
  double r = 0.0;       // frames per second
  std::uint64_t f_min = 0;
  std::uint64_t f_max = 0;
  std::vector<std::uint64_t> indices;
};

// Number of frames to extract:
//   min(n, clamp(round(frames_per_minute * n / (60 r)), f_min, f_max)).
inline std::uint64_t frame_count_for(std::uint64_t n, double r, const FrameScheduleConfig& cfg = {}) {
  if (n < 1) throw ContractError("plan_frames: n must be >= 1");
  if (!(r > 0.0)) throw ContractError("plan_frames: frame rate must be > 0");
  if (cfg.f_min > cfg.f_max) throw ContractError("plan_frames: f_min exceeds f_max");
  const double minutes = static_cast<double>(n) / (60.0 * r);
  const double rate_based = cfg.frames_per_minute * minutes;
  const auto wanted = rate_based >= static_cast<double>(cfg.f_max)
                          ? cfg.f_max
                          : static_cast<std::uint64_t>(std::llround(rate_based));
  return std::min(n, std::clamp(wanted, cfg.f_min, cfg.f_max));
}

// Evenly spaced indices floor(i * n / count); consecutive gaps take only the
// values floor(n / count) and ceil(n / count).
inline FrameSchedule plan_frames(std::uint64_t n, double r, const FrameScheduleConfig& cfg = {},
                                 std::string video_id = {}) {
  FrameSchedule s{std::move(video_id), n, r, cfg.f_min, cfg.f_max, {}};
  const std::uint64_t count = frame_count_for(n, r, cfg);
  s.indices.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    s.indices.push_back(static_cast<std::uint64_t>(static_cast<unsigned __int128>(i) * n / count));
  }
  return s;
}

}  // namespace catana::identity
