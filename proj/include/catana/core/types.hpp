#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "catana/core/date.hpp"

namespace catana {

struct ChannelRecord {
  std::string channel_id;
  std::string title;
  std::string category;
  std::optional<std::string> mcn;
  std::vector<std::string> featured_channels;
  std::uint64_t video_count = 0;

  bool operator==(const ChannelRecord&) const = default;
};

struct VideoRecord {
  std::string video_id;
  std::string channel_id;
  Date upload_date{};
  std::string category;
  std::uint64_t frame_count = 1;  // n
  double frame_rate = 30.0;       // r, frames per second

  bool operator==(const VideoRecord&) const = default;
};

// One daily observation of cumulative counters. Subscribers only exist for
// channel subjects; comments are stored but never analyzed.
struct Sample {
  Date date{};
  std::uint64_t views = 0;
  std::optional<std::uint64_t> subscribers;
  std::optional<std::uint64_t> comments;

  bool operator==(const Sample&) const = default;
};

struct PopularitySeries {
  std::string subject_id;
  std::vector<Sample> samples;  // date-ordered

  bool operator==(const PopularitySeries&) const = default;
};

// Flat (subject, date) row as stored in snapshots.jsonl.
struct SnapshotRow {
  std::string subject_id;
  Sample sample;

  bool operator==(const SnapshotRow&) const = default;
};

struct FaceObservation {
  std::string video_id;
  std::uint32_t frame_index = 0;
  std::vector<float> embedding;

  bool operator==(const FaceObservation&) const = default;
};

}  // namespace catana
