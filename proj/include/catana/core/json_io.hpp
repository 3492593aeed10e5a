#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "catana/core/error.hpp"
#include "catana/core/types.hpp"

namespace catana {

using nlohmann::json;

namespace detail {

template <typename T>
T required(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    throw ContractError(std::string("missing field '") + key + "'");
  }
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw ContractError(std::string("bad field '") + key + "': " + e.what());
  }
}

template <typename T>
std::optional<T> optional_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw ContractError(std::string("bad field '") + key + "': " + e.what());
  }
}

}  // namespace detail

inline void to_json(json& j, const ChannelRecord& c) {
  j = json{{"channel_id", c.channel_id},
           {"title", c.title},
           {"category", c.category},
           {"featured_channels", c.featured_channels},
           {"video_count", c.video_count}};
  if (c.mcn) j["mcn"] = *c.mcn;
}

inline void from_json(const json& j, ChannelRecord& c) {
  c.channel_id = detail::required<std::string>(j, "channel_id");
  c.title = j.value("title", std::string{});
  c.category = j.value("category", std::string{});
  c.mcn = detail::optional_field<std::string>(j, "mcn");
  c.featured_channels =
      detail::optional_field<std::vector<std::string>>(j, "featured_channels").value_or(
          std::vector<std::string>{});
  c.video_count = j.value("video_count", std::uint64_t{0});
}

inline void to_json(json& j, const VideoRecord& v) {
  j = json{{"video_id", v.video_id},         {"channel_id", v.channel_id},
           {"upload_date", format_date(v.upload_date)}, {"category", v.category},
           {"frame_count", v.frame_count},   {"frame_rate", v.frame_rate}};
}

inline void from_json(const json& j, VideoRecord& v) {
  v.video_id = detail::required<std::string>(j, "video_id");
  v.channel_id = detail::required<std::string>(j, "channel_id");
  v.upload_date = parse_date(detail::required<std::string>(j, "upload_date"));
  v.category = j.value("category", std::string{});
  v.frame_count = detail::required<std::uint64_t>(j, "frame_count");
  v.frame_rate = detail::required<double>(j, "frame_rate");
  if (v.frame_count < 1) throw ContractError("video " + v.video_id + ": frame_count must be >= 1");
  if (!(v.frame_rate > 0.0)) throw ContractError("video " + v.video_id + ": frame_rate must be > 0");
}

inline void to_json(json& j, const SnapshotRow& r) {
  j = json{{"subject_id", r.subject_id},
           {"date", format_date(r.sample.date)},
           {"views", r.sample.views}};
  if (r.sample.subscribers) j["subscribers"] = *r.sample.subscribers;
  if (r.sample.comments) j["comments"] = *r.sample.comments;
}

inline void from_json(const json& j, SnapshotRow& r) {
  r.subject_id = detail::required<std::string>(j, "subject_id");
  r.sample.date = parse_date(detail::required<std::string>(j, "date"));
  r.sample.views = detail::required<std::uint64_t>(j, "views");
  r.sample.subscribers = detail::optional_field<std::uint64_t>(j, "subscribers");
  r.sample.comments = detail::optional_field<std::uint64_t>(j, "comments");
}

// Series are not a file format of their own; they travel as snapshot rows.
inline void to_json(json& j, const PopularitySeries& s) {
  j = json::array();
  for (const auto& sample : s.samples) j.push_back(SnapshotRow{s.subject_id, sample});
}

template <typename T>
std::vector<T> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("cannot open " + path.string());
  std::vector<T> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(json::parse(line).get<T>());
    } catch (const json::exception& e) {
      throw ContractError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const ContractError& e) {
      throw ContractError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

template <typename T>
void write_jsonl(const std::filesystem::path& path, const std::vector<T>& rows) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ContractError("cannot write " + path.string());
  for (const auto& row : rows) out << json(row).dump() << '\n';
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ContractError(path.string() + ": " + e.what());
  }
}

inline void write_json_file(const std::filesystem::path& path, const json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ContractError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

// Groups flat rows into per-subject series, sorted by date. Duplicate dates
// are kept so validate_series can report them.
inline std::map<std::string, PopularitySeries> group_series(const std::vector<SnapshotRow>& rows) {
  std::map<std::string, PopularitySeries> out;
  for (const auto& r : rows) {
    auto& s = out[r.subject_id];
    s.subject_id = r.subject_id;
    s.samples.push_back(r.sample);
  }
  for (auto& [id, s] : out) {
    std::stable_sort(s.samples.begin(), s.samples.end(),
                     [](const Sample& a, const Sample& b) { return a.date < b.date; });
  }
  return out;
}

}  // namespace catana
