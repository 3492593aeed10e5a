#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "catana/core/date.hpp"
#include "catana/core/error.hpp"
#include "catana/core/json_io.hpp"
#include "catana/core/types.hpp"
#include "catana/ingest/fetcher.hpp"
#include "catana/util/parallel.hpp"
#include "catana/util/random.hpp"

namespace catana::ingest {

struct PopulateConfig {
  std::vector<std::string> seed_ids;
  int depth = 0;
  std::size_t threads = 1;
};

struct Skipped {
  std::string id;
  std::string reason;

  bool operator==(const Skipped&) const = default;
};

struct PopulateResult {
  std::vector<ChannelRecord> channels;  // sorted by id
  std::vector<VideoRecord> videos;      // grouped by channel, in channel order
  std::vector<Skipped> skipped;
};

// Breadth-first over featured channel lists. Each level is fetched in
// lexicographic order; a channel is fetched at most once.
inline PopulateResult populate(const PopulateConfig& cfg, Fetcher& fetcher) {
  if (cfg.seed_ids.empty()) throw ContractError("populate: no seed channels");
  if (cfg.depth < 0) throw ContractError("populate: depth must be >= 0");
  PopulateResult out;
  std::set<std::string> visited(cfg.seed_ids.begin(), cfg.seed_ids.end());
  std::vector<std::string> level(visited.begin(), visited.end());

  struct Fetched {
    std::optional<ChannelRecord> channel;
    std::vector<VideoRecord> uploads;
    std::string error;
  };

  for (int depth = 0; !level.empty(); ++depth) {
    std::vector<Fetched> got(level.size());
    parallel_for(level.size(), cfg.threads, [&](std::size_t i) {
      try {
        auto c = fetcher.get_channel(level[i]);
        got[i].uploads = fetcher.get_uploads(level[i]);
        got[i].channel = std::move(c);
      } catch (const FetchError& e) {
        got[i].error = e.what();
      }
    });
    std::set<std::string> next;
    for (std::size_t i = 0; i < level.size(); ++i) {
      if (!got[i].channel) {
        out.skipped.push_back({level[i], got[i].error});
        continue;
      }
      auto c = std::move(*got[i].channel);
      c.channel_id = level[i];
      std::erase(c.featured_channels, c.channel_id);
      c.video_count = got[i].uploads.size();
      if (depth < cfg.depth) {
        for (const auto& f : c.featured_channels) {
          if (visited.insert(f).second) next.insert(f);
        }
      }
      for (auto& v : got[i].uploads) {
        v.channel_id = c.channel_id;
        out.videos.push_back(std::move(v));
      }
      out.channels.push_back(std::move(c));
    }
    level.assign(next.begin(), next.end());
  }
  std::sort(out.channels.begin(), out.channels.end(),
            [](const auto& a, const auto& b) { return a.channel_id < b.channel_id; });
  std::stable_sort(out.videos.begin(), out.videos.end(),
                   [](const auto& a, const auto& b) { return a.channel_id < b.channel_id; });
  return out;
}

// snapshots.jsonl keyed by (subject, date); writes are upserts and the file
// is rewritten sorted.
class SnapshotStore {
 public:
  explicit SnapshotStore(std::filesystem::path dir) : dir_(std::move(dir)) {
    if (std::filesystem::exists(path())) {
      for (auto& r : read_jsonl<SnapshotRow>(path())) rows_[{r.subject_id, r.sample.date}] = std::move(r.sample);
    }
  }

  std::filesystem::path path() const { return dir_ / "snapshots.jsonl"; }

  void upsert(const std::string& subject, const Sample& s) { rows_[{subject, s.date}] = s; }

  std::vector<SnapshotRow> rows() const {
    std::vector<SnapshotRow> out;
    for (const auto& [key, s] : rows_) out.push_back({key.first, s});
    return out;
  }

  void save() const { write_jsonl(path(), rows()); }

 private:
  std::filesystem::path dir_;
  std::map<std::pair<std::string, Date>, Sample> rows_;
};

struct DailyResult {
  std::size_t rows_written = 0;
  std::vector<std::string> new_videos;
  std::vector<Skipped> failures;
};

// One crawl day against a store directory holding channels.jsonl and
// videos.jsonl. New uploads are appended to videos.jsonl; every known
// channel and video gets a row for `date` unless its fetch fails.
inline DailyResult daily_snapshot(const std::filesystem::path& store_dir, Fetcher& fetcher, Date date,
                                  std::size_t threads = 1) {
  auto channels = read_jsonl<ChannelRecord>(store_dir / "channels.jsonl");
  std::vector<VideoRecord> videos;
  if (std::filesystem::exists(store_dir / "videos.jsonl")) videos = read_jsonl<VideoRecord>(store_dir / "videos.jsonl");
  std::set<std::string> known;
  for (const auto& v : videos) known.insert(v.video_id);

  DailyResult out;
  std::vector<std::vector<VideoRecord>> uploads(channels.size());
  std::vector<std::string> upload_errors(channels.size());
  parallel_for(channels.size(), threads, [&](std::size_t i) {
    try {
      uploads[i] = fetcher.get_uploads(channels[i].channel_id);
    } catch (const FetchError& e) {
      upload_errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < channels.size(); ++i) {
    if (!upload_errors[i].empty()) {
      out.failures.push_back({channels[i].channel_id, upload_errors[i]});
      continue;
    }
    for (auto& v : uploads[i]) {
      v.channel_id = channels[i].channel_id;
      if (known.insert(v.video_id).second) {
        out.new_videos.push_back(v.video_id);
        videos.push_back(std::move(v));
      }
    }
  }
  std::map<std::string, std::uint64_t> counts;
  for (const auto& v : videos) ++counts[v.channel_id];
  for (auto& c : channels) c.video_count = counts[c.channel_id];

  std::vector<std::string> subjects;
  for (const auto& c : channels) subjects.push_back(c.channel_id);
  for (const auto& v : videos) subjects.push_back(v.video_id);
  std::vector<std::optional<Stats>> stats(subjects.size());
  std::vector<std::string> errors(subjects.size());
  parallel_for(subjects.size(), threads, [&](std::size_t i) {
    try {
      stats[i] = fetcher.get_stats(subjects[i]);
    } catch (const FetchError& e) {
      errors[i] = e.what();
    }
  });

  SnapshotStore store(store_dir);
  for (std::size_t i = 0; i < subjects.size(); ++i) {
    if (!stats[i]) {
      out.failures.push_back({subjects[i], errors[i]});
      continue;
    }
    const bool is_channel = i < channels.size();
    store.upsert(subjects[i], {date, stats[i]->views, is_channel ? stats[i]->subscribers : std::nullopt,
                               stats[i]->comments});
    ++out.rows_written;
  }
  store.save();
  write_jsonl(store_dir / "channels.jsonl", channels);
  write_jsonl(store_dir / "videos.jsonl", videos);
  return out;
}

struct MemberEntry {
  std::string channel_id;
  std::uint64_t subscribers = 0;
};

struct SeedSelectionConfig {
  std::map<std::string, std::vector<MemberEntry>> mcn_member_lists;
  std::size_t sample_size_per_mcn = 1500;
  std::size_t top_k_forced = 100;
  std::uint64_t rng_seed = 0;
};

struct SeedSelection {
  std::map<std::string, std::vector<std::string>> per_mcn;
  std::vector<std::string> ids;  // union in MCN order, first occurrence kept
  std::vector<std::string> warnings;
};

// Per MCN: the top_k_forced channels by subscribers (ties by id), then a
// uniform sample without replacement from the rest up to sample_size_per_mcn.
inline SeedSelection select_seeds(const SeedSelectionConfig& cfg) {
  if (cfg.top_k_forced > cfg.sample_size_per_mcn) throw ContractError("top_k_forced exceeds sample_size_per_mcn");
  SeedSelection out;
  Rng rng(cfg.rng_seed);
  std::set<std::string> seen;
  for (const auto& [mcn, members] : cfg.mcn_member_lists) {
    auto ranked = members;
    std::sort(ranked.begin(), ranked.end(), [](const MemberEntry& a, const MemberEntry& b) {
      return a.subscribers != b.subscribers ? a.subscribers > b.subscribers : a.channel_id < b.channel_id;
    });
    if (ranked.size() < cfg.sample_size_per_mcn) {
      out.warnings.push_back(mcn + ": only " + std::to_string(ranked.size()) + " members, fewer than " +
                             std::to_string(cfg.sample_size_per_mcn) + "; taking all");
    }
    const std::size_t forced = std::min(cfg.top_k_forced, ranked.size());
    std::vector<std::string> picked;
    for (std::size_t i = 0; i < forced; ++i) picked.push_back(ranked[i].channel_id);
    std::vector<std::string> rest;
    for (std::size_t i = forced; i < ranked.size(); ++i) rest.push_back(ranked[i].channel_id);
    const std::size_t wanted = std::min(cfg.sample_size_per_mcn, ranked.size()) - forced;
    // Partial Fisher-Yates: the first `wanted` slots become the sample.
    for (std::size_t i = 0; i < wanted; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(rest.size() - i));
      std::swap(rest[i], rest[j]);
    }
    std::vector<std::string> sampled(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(wanted));
    std::sort(sampled.begin(), sampled.end());
    picked.insert(picked.end(), sampled.begin(), sampled.end());
    for (const auto& id : picked) {
      if (seen.insert(id).second) out.ids.push_back(id);
    }
    out.per_mcn[mcn] = std::move(picked);
  }
  return out;
}

inline SeedSelectionConfig members_from_json(const json& j) {
  SeedSelectionConfig cfg;
  try {
    for (const auto& [mcn, list] : j.items()) {
      auto& members = cfg.mcn_member_lists[mcn];
      for (const auto& m : list) members.push_back({m.at("channel_id").get<std::string>(), m.at("subscribers").get<std::uint64_t>()});
    }
  } catch (const json::exception& e) {
    throw ContractError(std::string("malformed member lists: ") + e.what());
  }
  return cfg;
}

}  // namespace catana::ingest
