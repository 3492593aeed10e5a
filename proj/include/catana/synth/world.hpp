#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "catana/core/date.hpp"
#include "catana/core/embedding_container.hpp"
#include "catana/core/error.hpp"
#include "catana/core/json_io.hpp"
#include "catana/core/types.hpp"
#include "catana/graph/graph.hpp"
#include "catana/identity/frame_schedule.hpp"
#include "catana/synth/blobs.hpp"
#include "catana/util/random.hpp"

namespace catana::synth {

struct WorldSpec {
  std::uint64_t rng_seed = 1;
  std::size_t channel_count = 30;
  std::size_t identities_per_channel = 1;
  std::size_t videos_per_channel = 10;
  std::size_t embedding_dim = 64;
  double blob_sigma = 1.0;
  double identity_separation = 8.0;  // in multiples of blob_sigma
  double collab_probability = 0.2;
  double collab_boost_pct = 100.0;
  int horizon_days = 60;

  std::size_t min_observations = 30;  // per identity per video
  std::size_t max_observations = 60;
  int video_window_days = 12;
  int collab_window_days = 2;
  double view_decay = 0.8;
  double video_noise = 0.15;  // log-sd of the per-video quality factor
  double daily_noise = 0.1;   // log-sd of day-to-day fluctuation
  std::string start_date = "2020-01-01";

  void validate() const {
    if (channel_count < 2 || identities_per_channel < 1 || videos_per_channel < 1 || embedding_dim < 1) {
      throw ContractError("world spec: counts must be positive (at least 2 channels)");
    }
    if (!(blob_sigma > 0) || !(identity_separation > 0)) throw ContractError("world spec: sigma and separation must be positive");
    if (collab_probability < 0 || collab_probability > 1) throw ContractError("world spec: collab_probability outside [0, 1]");
    if (collab_boost_pct <= -100) throw ContractError("world spec: collab_boost_pct must exceed -100");
    if (min_observations < 1 || max_observations < min_observations) throw ContractError("world spec: bad observation range");
    if (horizon_days < video_window_days + 1 || video_window_days < 2 || collab_window_days < 0) {
      throw ContractError("world spec: horizon_days must exceed video_window_days");
    }
    if (!(view_decay > 0 && view_decay <= 1)) throw ContractError("world spec: view_decay must be in (0, 1]");
    parse_date(start_date);
  }
};

inline void to_json(json& j, const WorldSpec& s) {
  j = json{{"rng_seed", s.rng_seed},
           {"channel_count", s.channel_count},
           {"identities_per_channel", s.identities_per_channel},
           {"videos_per_channel", s.videos_per_channel},
           {"embedding_dim", s.embedding_dim},
           {"blob_sigma", s.blob_sigma},
           {"identity_separation", s.identity_separation},
           {"collab_probability", s.collab_probability},
           {"collab_boost_pct", s.collab_boost_pct},
           {"horizon_days", s.horizon_days},
           {"min_observations", s.min_observations},
           {"max_observations", s.max_observations},
           {"video_window_days", s.video_window_days},
           {"collab_window_days", s.collab_window_days},
           {"view_decay", s.view_decay},
           {"video_noise", s.video_noise},
           {"daily_noise", s.daily_noise},
           {"start_date", s.start_date}};
}

// Unknown keys are rejected; missing keys keep their defaults.
inline void from_json(const json& j, WorldSpec& s) {
  const json defaults = WorldSpec{};
  for (const auto& [key, value] : j.items()) {
    if (!defaults.contains(key)) throw ContractError("world spec: unknown key '" + key + "'");
  }
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("rng_seed", s.rng_seed);
  get("channel_count", s.channel_count);
  get("identities_per_channel", s.identities_per_channel);
  get("videos_per_channel", s.videos_per_channel);
  get("embedding_dim", s.embedding_dim);
  get("blob_sigma", s.blob_sigma);
  get("identity_separation", s.identity_separation);
  get("collab_probability", s.collab_probability);
  get("collab_boost_pct", s.collab_boost_pct);
  get("horizon_days", s.horizon_days);
  get("min_observations", s.min_observations);
  get("max_observations", s.max_observations);
  get("video_window_days", s.video_window_days);
  get("collab_window_days", s.collab_window_days);
  get("view_decay", s.view_decay);
  get("video_noise", s.video_noise);
  get("daily_noise", s.daily_noise);
  get("start_date", s.start_date);
}

struct PlantedIdentity {
  std::string identity_id;
  std::string home_channel;
  std::vector<double> center;
};

struct GroundTruth {
  std::vector<PlantedIdentity> identities;
  std::map<std::string, std::vector<std::string>> appearances;  // video -> identity ids, hosts first
  std::set<std::string> collab_videos;
  std::map<graph::Edge, std::uint64_t> edges;
  std::uint64_t collaboration_count = 0;
  std::map<std::string, double> channel_base_views;
  std::map<std::string, double> channel_subscriber_rate;
  double collab_boost_pct = 0;
};

struct World {
  WorldSpec spec;
  std::vector<ChannelRecord> channels;
  std::vector<VideoRecord> videos;
  std::vector<SnapshotRow> snapshots;
  std::map<std::string, EmbeddingFile> embeddings;
  GroundTruth truth;
};

inline std::string padded(const std::string& prefix, std::size_t i, std::size_t count) {
  const std::size_t width = std::to_string(std::max<std::size_t>(count, 1) - 1).size();
  std::string digits = std::to_string(i);
  return prefix + std::string(width > digits.size() ? width - digits.size() : 0, '0') + digits;
}

// Deterministic per rng_seed: a single RNG stream is consumed in a fixed order.
inline World generate_world(const WorldSpec& spec) {
  spec.validate();
  Rng rng(spec.rng_seed);
  World w;
  w.spec = spec;
  w.truth.collab_boost_pct = spec.collab_boost_pct;
  const Date start = parse_date(spec.start_date);
  const std::size_t C = spec.channel_count;
  static const std::vector<std::string> kCategories{"Comedy", "Education", "Entertainment", "Gaming", "Music"};
  static const std::vector<std::string> kNetworks{"Alpha", "Bravo", ""};

  // Channels and their people.
  const std::size_t people = C * spec.identities_per_channel;
  const auto centers = separated_centers(rng, people, spec.embedding_dim, spec.identity_separation * spec.blob_sigma);
  std::vector<std::vector<std::size_t>> hosts(C);
  for (std::size_t p = 0; p < people; ++p) {
    const std::size_t c = p / spec.identities_per_channel;
    hosts[c].push_back(p);
    w.truth.identities.push_back({padded("person-", p, people), padded("ch", c, C), centers[p]});
  }
  std::vector<double> subs0(C), sub_rate(C), base_views(C);
  for (std::size_t c = 0; c < C; ++c) {
    ChannelRecord rec;
    rec.channel_id = padded("ch", c, C);
    rec.title = "Channel " + std::to_string(c);
    rec.category = kCategories[rng.below(kCategories.size())];
    const auto& net = kNetworks[rng.below(kNetworks.size())];
    if (!net.empty()) rec.mcn = net;
    rec.video_count = spec.videos_per_channel;
    w.channels.push_back(std::move(rec));
    subs0[c] = std::floor(std::pow(10.0, rng.uniform(2.5, 6.5)));
    sub_rate[c] = 5.0 + 0.002 * subs0[c];
    base_views[c] = std::pow(10.0, rng.uniform(2.0, 4.0));
    w.truth.channel_base_views[w.channels[c].channel_id] = base_views[c];
    w.truth.channel_subscriber_rate[w.channels[c].channel_id] = sub_rate[c];
  }
  for (std::size_t c = 0; c < C; ++c) {
    std::set<std::string> featured;
    for (int k = 0; k < 2; ++k) {
      const std::size_t other = (c + 1 + rng.below(C - 1)) % C;
      featured.insert(w.channels[other].channel_id);
      if (rng.bernoulli(0.5)) {
        auto& back = w.channels[other].featured_channels;
        if (std::find(back.begin(), back.end(), w.channels[c].channel_id) == back.end()) {
          back.push_back(w.channels[c].channel_id);
        }
      }
    }
    auto& mine = w.channels[c].featured_channels;
    for (const auto& f : featured) {
      if (std::find(mine.begin(), mine.end(), f) == mine.end()) mine.push_back(f);
    }
  }
  for (auto& c : w.channels) std::sort(c.featured_channels.begin(), c.featured_channels.end());

  // Videos, appearances and embeddings.
  const int last_upload = spec.horizon_days - spec.video_window_days;
  std::vector<std::vector<int>> collab_days(C);  // host and guest collaboration days per channel
  struct VideoPlan {
    std::size_t channel;
    int day;
    double quality;
    bool collab;
  };
  std::vector<VideoPlan> plans;
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t k = 0; k < spec.videos_per_channel; ++k) {
      VideoRecord v;
      v.video_id = w.channels[c].channel_id + "-v" + padded("", k, spec.videos_per_channel);
      v.channel_id = w.channels[c].channel_id;
      const int day = static_cast<int>(rng.below(static_cast<std::uint64_t>(last_upload)));
      v.upload_date = add_days(start, day);
      v.category = w.channels[c].category;
      v.frame_rate = 30.0;
      v.frame_count = static_cast<std::uint64_t>(rng.uniform(4.0, 30.0) * 60.0 * v.frame_rate);

      std::vector<std::size_t> present = hosts[c];
      bool collab = false;
      if (rng.bernoulli(spec.collab_probability)) {
        const std::size_t guest_channel = (c + 1 + rng.below(C - 1)) % C;
        const auto& pool = hosts[guest_channel];
        present.push_back(pool[rng.below(pool.size())]);
        collab = true;
        ++w.truth.edges[{w.channels[guest_channel].channel_id, v.channel_id}];
        ++w.truth.collaboration_count;
        w.truth.collab_videos.insert(v.video_id);
        collab_days[c].push_back(day);
        collab_days[guest_channel].push_back(day);
      }

      const auto schedule = identity::plan_frames(v.frame_count, v.frame_rate);
      std::vector<std::pair<std::uint32_t, std::size_t>> faces;  // (frame, person)
      for (std::size_t p : present) {
        w.truth.appearances[v.video_id].push_back(w.truth.identities[p].identity_id);
        const std::size_t m = spec.min_observations + rng.below(spec.max_observations - spec.min_observations + 1);
        std::vector<std::uint64_t> frames = schedule.indices;
        const std::size_t take = std::min(m, frames.size());
        for (std::size_t i = 0; i < take; ++i) std::swap(frames[i], frames[i + rng.below(frames.size() - i)]);
        for (std::size_t i = 0; i < take; ++i) faces.push_back({static_cast<std::uint32_t>(frames[i]), p});
      }
      std::sort(faces.begin(), faces.end());
      EmbeddingFile file;
      file.dim = static_cast<std::uint32_t>(spec.embedding_dim);
      for (const auto& [frame, p] : faces) {
        file.frame_indices.push_back(frame);
        for (std::size_t d = 0; d < spec.embedding_dim; ++d) {
          file.values.push_back(static_cast<float>(centers[p][d] + rng.normal(0.0, spec.blob_sigma)));
        }
      }
      w.embeddings[v.video_id] = std::move(file);
      plans.push_back({c, day, rng.unit_lognormal(spec.video_noise), collab});
      w.videos.push_back(std::move(v));
    }
  }

  // Popularity. Video views decay geometrically from upload; collaboration
  // videos are scaled by (1 + boost / 100). Channel subscriber gains get the
  // same factor on [u, u + collab_window] around every collaboration day u.
  const double boost = 1.0 + spec.collab_boost_pct / 100.0;
  std::vector<std::vector<double>> channel_daily_views(C, std::vector<double>(static_cast<std::size_t>(spec.horizon_days), 0.0));
  for (std::size_t i = 0; i < w.videos.size(); ++i) {
    const auto& plan = plans[i];
    double cumulative = 0;
    for (int d = plan.day; d < spec.horizon_days; ++d) {
      const double daily = base_views[plan.channel] * plan.quality * (plan.collab ? boost : 1.0) *
                           std::pow(spec.view_decay, d - plan.day) * rng.unit_lognormal(spec.daily_noise);
      cumulative += daily;
      channel_daily_views[plan.channel][static_cast<std::size_t>(d)] += daily;
      w.snapshots.push_back({w.videos[i].video_id,
                             {add_days(start, d), static_cast<std::uint64_t>(std::llround(cumulative)), std::nullopt,
                              std::nullopt}});
    }
  }
  for (std::size_t c = 0; c < C; ++c) {
    double subs = subs0[c];
    double views = 100.0 * base_views[c];
    for (int d = 0; d < spec.horizon_days; ++d) {
      bool in_window = false;
      for (int u : collab_days[c]) in_window = in_window || (d >= u && d <= u + spec.collab_window_days);
      subs += sub_rate[c] * (in_window ? boost : 1.0) * rng.unit_lognormal(0.2);
      views += channel_daily_views[c][static_cast<std::size_t>(d)] + 2.0 * base_views[c] * rng.unit_lognormal(0.2);
      w.snapshots.push_back({w.channels[c].channel_id,
                             {add_days(start, d), static_cast<std::uint64_t>(std::llround(views)),
                              static_cast<std::uint64_t>(std::llround(subs)), std::nullopt}});
    }
  }
  std::sort(w.snapshots.begin(), w.snapshots.end(), [](const SnapshotRow& a, const SnapshotRow& b) {
    return a.subject_id != b.subject_id ? a.subject_id < b.subject_id : a.sample.date < b.sample.date;
  });
  return w;
}

inline json truth_to_json(const GroundTruth& t) {
  json j;
  j["collab_boost_pct"] = t.collab_boost_pct;
  j["collaboration_count"] = t.collaboration_count;
  j["identities"] = json::array();
  for (const auto& p : t.identities) {
    j["identities"].push_back({{"identity_id", p.identity_id}, {"home_channel", p.home_channel}, {"center", p.center}});
  }
  j["appearances"] = t.appearances;
  j["collab_videos"] = t.collab_videos;
  j["edges"] = json::array();
  for (const auto& [e, weight] : t.edges) {
    j["edges"].push_back({{"origin", e.first}, {"destination", e.second}, {"weight", weight}});
  }
  j["channel_base_views"] = t.channel_base_views;
  j["channel_subscriber_rate"] = t.channel_subscriber_rate;
  return j;
}

inline GroundTruth truth_from_json(const json& j) {
  GroundTruth t;
  try {
    t.collab_boost_pct = j.at("collab_boost_pct").get<double>();
    t.collaboration_count = j.at("collaboration_count").get<std::uint64_t>();
    for (const auto& p : j.at("identities")) {
      t.identities.push_back({p.at("identity_id").get<std::string>(), p.at("home_channel").get<std::string>(),
                              p.at("center").get<std::vector<double>>()});
    }
    t.appearances = j.at("appearances").get<std::map<std::string, std::vector<std::string>>>();
    t.collab_videos = j.at("collab_videos").get<std::set<std::string>>();
    for (const auto& e : j.at("edges")) {
      t.edges[{e.at("origin").get<std::string>(), e.at("destination").get<std::string>()}] =
          e.at("weight").get<std::uint64_t>();
    }
    t.channel_base_views = j.at("channel_base_views").get<std::map<std::string, double>>();
    t.channel_subscriber_rate = j.at("channel_subscriber_rate").get<std::map<std::string, double>>();
  } catch (const json::exception& e) {
    throw ContractError(std::string("malformed truth.json: ") + e.what());
  }
  return t;
}

// channels.jsonl, videos.jsonl, snapshots.jsonl, embeddings/<video>.ctem,
// truth.json and spec.json.
inline void write_world(const World& w, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "embeddings");
  write_jsonl(dir / "channels.jsonl", w.channels);
  write_jsonl(dir / "videos.jsonl", w.videos);
  write_jsonl(dir / "snapshots.jsonl", w.snapshots);
  for (const auto& [video, file] : w.embeddings) write_embeddings(dir / "embeddings" / (video + ".ctem"), file);
  write_json_file(dir / "truth.json", truth_to_json(w.truth));
  write_json_file(dir / "spec.json", json(w.spec));
}

struct RecoveryScore {
  double precision = 1.0;
  double recall = 1.0;
  double weight_error = 0.0;  // mean |detected - planted| over true-positive edges
  std::size_t true_positives = 0, false_positives = 0, false_negatives = 0;
};

// Edge-level precision and recall, weights ignored. An empty detection has
// precision 1; an empty truth has recall 1.
inline RecoveryScore score_recovery(const std::map<graph::Edge, std::uint64_t>& truth,
                                    const graph::CollaborationGraph& detected) {
  RecoveryScore s;
  double err = 0;
  for (const auto& [e, w] : detected.edges()) {
    const auto it = truth.find(e);
    if (it == truth.end()) {
      ++s.false_positives;
    } else {
      ++s.true_positives;
      err += std::abs(static_cast<double>(w) - static_cast<double>(it->second));
    }
  }
  s.false_negatives = truth.size() - s.true_positives;
  if (s.true_positives + s.false_positives > 0) {
    s.precision = static_cast<double>(s.true_positives) / static_cast<double>(s.true_positives + s.false_positives);
  }
  if (!truth.empty()) s.recall = static_cast<double>(s.true_positives) / static_cast<double>(truth.size());
  if (s.true_positives > 0) s.weight_error = err / static_cast<double>(s.true_positives);
  return s;
}

}  // namespace catana::synth
