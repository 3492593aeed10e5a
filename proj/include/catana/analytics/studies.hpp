#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "catana/analytics/growth.hpp"
#include "catana/core/types.hpp"

namespace catana::analytics {

using SeriesMap = std::map<std::string, PopularitySeries>;

// Per-video 12-day maxima and gradients split by collaboration flag, and the
// per-channel growth factor for channels that have both kinds of video.
struct VideoGrowth {
  std::vector<double> collab_maxima;
  std::vector<double> non_collab_maxima;
  std::vector<double> collab_gradients;
  std::vector<double> non_collab_gradients;
  std::map<std::string, double> channel_factors;
  std::size_t excluded_videos = 0;

  std::vector<double> factors() const {
    std::vector<double> f;
    for (const auto& [c, v] : channel_factors) f.push_back(v);
    return f;
  }
};

inline VideoGrowth video_growth(std::span<const VideoRecord> videos, const SeriesMap& series,
                                const std::set<std::string>& collab_videos, int days = 12) {
  VideoGrowth out;
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> per_channel;
  for (const auto& v : videos) {
    const auto it = series.find(v.video_id);
    if (it == series.end()) {
      ++out.excluded_videos;
      continue;
    }
    const auto peak = max_views_window(it->second, days);
    const auto grads = daily_gradients(it->second, days);
    if (!peak || !grads) {
      ++out.excluded_videos;
      continue;
    }
    const bool collab = collab_videos.count(v.video_id) > 0;
    auto& side = per_channel[v.channel_id];
    (collab ? side.first : side.second).push_back(static_cast<double>(*peak));
    (collab ? out.collab_maxima : out.non_collab_maxima).push_back(static_cast<double>(*peak));
    auto& g = collab ? out.collab_gradients : out.non_collab_gradients;
    g.insert(g.end(), grads->begin(), grads->end());
  }
  for (const auto& [channel, sides] : per_channel) {
    if (const auto f = channel_growth_factor(sides.first, sides.second)) out.channel_factors[channel] = *f;
  }
  return out;
}

inline std::optional<double> mean_of_deltas(const std::vector<DatedDelta>& ds) {
  if (ds.empty()) return std::nullopt;
  double s = 0;
  for (const auto& d : ds) s += d.delta;
  return s / static_cast<double>(ds.size());
}

struct ChannelTimeline {
  std::string channel_id;
  PopularitySeries series;
  std::vector<Date> collab_dates;
};

struct EffectRow {
  std::string day;  // "0".."horizon-1", or "baseline"
  Metric metric = Metric::subscribers;
  GrowthStats stats;
};

// Day-d growth for each channel is pct_growth(baseline, mean delta on day u+d
// over its collaboration uploads u); the baseline is the mean delta on days
// outside every [u, u + horizon - 1]. The baseline row summarises the
// channels' baseline deltas themselves, in metric units.
inline std::vector<EffectRow> effect_horizon(std::span<const ChannelTimeline> channels, int horizon = 6,
                                             double level = 0.95) {
  if (horizon < 1) throw ContractError("effect horizon must be positive");
  std::vector<EffectRow> rows;
  for (Metric m : {Metric::subscribers, Metric::views}) {
    std::vector<std::vector<double>> per_day(static_cast<std::size_t>(horizon));
    std::vector<double> baselines;
    for (const auto& ch : channels) {
      if (ch.collab_dates.empty()) continue;
      const auto split = subscriber_window_split(ch.series, ch.collab_dates, horizon - 1, m);
      const auto baseline = mean_of_deltas(split.non_collab);
      if (!baseline) continue;
      baselines.push_back(*baseline);
      std::map<Date, double> by_date;
      for (const auto& d : split.collab) by_date[d.date] = d.delta;
      for (int day = 0; day < horizon; ++day) {
        double sum = 0;
        std::size_t n = 0;
        for (Date u : ch.collab_dates) {
          const auto it = by_date.find(add_days(u, day));
          if (it != by_date.end()) {
            sum += it->second;
            ++n;
          }
        }
        if (n == 0) continue;
        if (const auto g = pct_growth(*baseline, sum / static_cast<double>(n))) {
          per_day[static_cast<std::size_t>(day)].push_back(*g);
        }
      }
    }
    for (int day = 0; day < horizon; ++day) {
      const auto& xs = per_day[static_cast<std::size_t>(day)];
      if (xs.size() >= 2) rows.push_back({std::to_string(day), m, growth_stats(xs, level)});
    }
    if (baselines.size() >= 2) rows.push_back({"baseline", m, growth_stats(baselines, level)});
  }
  return rows;
}

// A guest of channel `guest_channel` appeared in a video uploaded by
// `host_channel` on `date`.
struct CollabEvent {
  std::string guest_channel;
  std::string host_channel;
  Date date{};
};

struct ImpactRow {
  std::string guest_group;
  std::string host_group;
  std::string side;  // "guest" or "host"
  Metric metric = Metric::views;
  GrowthStats stats;
};

struct ImpactInputs {
  const SeriesMap* channel_series = nullptr;
  const std::map<std::string, std::vector<Date>>* uploads = nullptr;  // channel -> upload dates
  const std::map<std::string, std::string>* labels = nullptr;         // channel -> group
  int window = 2;
  double level = 0.95;
};

// Per (guest group, host group, side, metric): growth of the channel's mean
// delta over [date, date + window] relative to its mean delta outside all of
// its collaboration windows. Host events count only on days with a single
// upload; guest events only when the guest channel uploaded nothing itself
// that day.
inline std::vector<ImpactRow> impact_by_group(std::span<const CollabEvent> events, const ImpactInputs& in) {
  if (!in.channel_series || !in.uploads || !in.labels) throw ContractError("impact_by_group: missing inputs");
  static const std::vector<Date> kNoUploads;
  auto uploads_of = [&](const std::string& c) -> const std::vector<Date>& {
    const auto it = in.uploads->find(c);
    return it == in.uploads->end() ? kNoUploads : it->second;
  };
  auto label_of = [&](const std::string& c) {
    const auto it = in.labels->find(c);
    return it == in.labels->end() || it->second.empty() ? std::string("None") : it->second;
  };

  std::map<std::string, std::vector<Date>> involved;
  for (const auto& e : events) {
    involved[e.guest_channel].push_back(e.date);
    involved[e.host_channel].push_back(e.date);
  }

  struct Cached {
    std::map<Date, double> deltas;
    std::optional<double> baseline;
  };
  std::map<std::pair<std::string, Metric>, Cached> cache;
  auto channel_data = [&](const std::string& c, Metric m) -> const Cached* {
    const auto key = std::make_pair(c, m);
    if (auto it = cache.find(key); it != cache.end()) return &it->second;
    const auto sit = in.channel_series->find(c);
    if (sit == in.channel_series->end()) return nullptr;
    Cached data;
    const auto split = subscriber_window_split(sit->second, involved[c], in.window, m);
    data.baseline = mean_of_deltas(split.non_collab);
    for (const auto& d : split.collab) data.deltas[d.date] = d.delta;
    return &cache.emplace(key, std::move(data)).first->second;
  };
  auto effect = [&](const std::string& c, Date u, Metric m) -> std::optional<double> {
    const auto* data = channel_data(c, m);
    if (!data || !data->baseline) return std::nullopt;
    double sum = 0;
    for (int k = 0; k <= in.window; ++k) {
      const auto it = data->deltas.find(add_days(u, k));
      if (it == data->deltas.end()) return std::nullopt;
      sum += it->second;
    }
    return pct_growth(*data->baseline, sum / static_cast<double>(in.window + 1));
  };

  std::map<std::tuple<std::string, std::string, std::string, Metric>, std::vector<double>> samples;
  for (const auto& e : events) {
    const Date day[1] = {e.date};
    const bool host_clean = !clean_collab_days(day, uploads_of(e.host_channel)).empty();
    auto guest_calendar = uploads_of(e.guest_channel);
    guest_calendar.push_back(e.date);
    const bool guest_clean = !clean_collab_days(day, guest_calendar).empty();
    const auto gg = label_of(e.guest_channel), hg = label_of(e.host_channel);
    for (Metric m : {Metric::views, Metric::subscribers}) {
      if (host_clean) {
        if (const auto x = effect(e.host_channel, e.date, m)) samples[{gg, hg, "host", m}].push_back(*x);
      }
      if (guest_clean) {
        if (const auto x = effect(e.guest_channel, e.date, m)) samples[{gg, hg, "guest", m}].push_back(*x);
      }
    }
  }

  std::vector<ImpactRow> rows;
  for (const auto& [key, xs] : samples) {
    if (xs.size() < 2) continue;
    const auto& [gg, hg, side, m] = key;
    rows.push_back({gg, hg, side, m, growth_stats(xs, in.level)});
  }
  return rows;
}

}  // namespace catana::analytics
