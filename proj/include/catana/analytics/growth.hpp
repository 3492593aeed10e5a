#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "catana/core/date.hpp"
#include "catana/core/error.hpp"
#include "catana/core/types.hpp"
#include "catana/util/order_stats.hpp"

namespace catana::analytics {

enum class Metric { views, subscribers };

inline const char* to_string(Metric m) { return m == Metric::views ? "views" : "subscribers"; }

struct WindowConfig {
  int video_window_days = 12;
  int collab_window_days = 2;
  int effect_horizon_days = 6;

  void validate() const {
    if (video_window_days < 2 || collab_window_days < 1 || effect_horizon_days < 1) {
      throw ContractError("window lengths must be positive (video window >= 2)");
    }
  }
};

inline std::optional<double> metric_value(const Sample& s, Metric m) {
  if (m == Metric::views) return static_cast<double>(s.views);
  if (s.subscribers) return static_cast<double>(*s.subscribers);
  return std::nullopt;
}

// The first `days` samples, required to be consecutive calendar days starting
// at the first sample. nullopt when the series is too short or has a gap.
inline std::optional<std::span<const Sample>> leading_window(const PopularitySeries& series, int days) {
  if (days < 1 || series.samples.size() < static_cast<std::size_t>(days)) return std::nullopt;
  const auto& s = series.samples;
  for (int i = 1; i < days; ++i) {
    if (days_between(s[0].date, s[static_cast<std::size_t>(i)].date) != i) return std::nullopt;
  }
  return std::span<const Sample>(s.data(), static_cast<std::size_t>(days));
}

// Largest cumulative view count among the first `days` daily samples;
// nullopt excludes the video.
inline std::optional<std::uint64_t> max_views_window(const PopularitySeries& series, int days = 12) {
  const auto w = leading_window(series, days);
  if (!w) return std::nullopt;
  std::uint64_t best = 0;
  for (const auto& s : *w) best = std::max(best, s.views);
  return best;
}

// days - 1 first differences of the leading window.
inline std::optional<std::vector<double>> daily_gradients(const PopularitySeries& series, int days = 12) {
  const auto w = leading_window(series, days);
  if (!w) return std::nullopt;
  std::vector<double> g;
  for (std::size_t i = 1; i < w->size(); ++i) {
    g.push_back(static_cast<double>((*w)[i].views) - static_cast<double>((*w)[i - 1].views));
  }
  return g;
}

inline std::optional<double> pct_growth(double base, double value) {
  if (!(base > 0.0)) return std::nullopt;
  return 100.0 * (value - base) / base;
}

// Growth from the mean non-collaboration maximum to the mean collaboration
// maximum; needs both sides.
inline std::optional<double> channel_growth_factor(std::span<const double> collab_maxima,
                                                   std::span<const double> non_collab_maxima) {
  if (collab_maxima.empty() || non_collab_maxima.empty()) return std::nullopt;
  return pct_growth(mean_of(non_collab_maxima), mean_of(collab_maxima));
}

struct MeanCi {
  double mean = 0, low = 0, high = 0;
};

inline double t_quantile(double level, std::size_t df) {
  boost::math::students_t dist(static_cast<double>(df));
  return boost::math::quantile(boost::math::complement(dist, (1.0 - level) / 2.0));
}

// Student-t interval on the mean.
inline MeanCi mean_ci(std::span<const double> xs, double level = 0.95) {
  if (xs.size() < 2) throw ContractError("mean_ci needs at least 2 samples");
  if (!(level > 0.0 && level < 1.0)) throw ContractError("confidence level must be in (0, 1)");
  const double m = mean_of(xs);
  const double half = t_quantile(level, xs.size() - 1) * sample_sd(xs) / std::sqrt(static_cast<double>(xs.size()));
  return {m, m - half, m + half};
}

struct GrowthStats {
  std::size_t sample_count = 0;
  double mean = 0, median = 0, p75 = 0, min = 0, max = 0;
  double ci_low = 0, ci_high = 0, ci_level = 0.95;
};

inline GrowthStats growth_stats(std::span<const double> xs, double level = 0.95) {
  const auto ci = mean_ci(xs, level);
  std::vector<double> s(xs.begin(), xs.end());
  std::sort(s.begin(), s.end());
  return {s.size(), ci.mean, percentile_sorted(s, 0.5), percentile_sorted(s, 0.75), s.front(), s.back(),
          ci.low, ci.high, level};
}

inline const std::vector<std::string>& growth_stats_columns() {
  static const std::vector<std::string> cols{"sample_count", "mean", "median", "p75", "min",
                                             "max", "ci_low", "ci_high", "ci_level"};
  return cols;
}

struct DatedDelta {
  Date date{};
  double delta = 0;

  bool operator==(const DatedDelta&) const = default;
};

// Delta dated d is value(d) - value(d - 1); pairs across a gap or with a
// missing metric produce nothing.
inline std::vector<DatedDelta> daily_deltas(const PopularitySeries& series, Metric m) {
  std::vector<DatedDelta> out;
  const auto& s = series.samples;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (days_between(s[i - 1].date, s[i].date) != 1) continue;
    const auto a = metric_value(s[i - 1], m), b = metric_value(s[i], m);
    if (a && b) out.push_back({s[i].date, *b - *a});
  }
  return out;
}

inline bool in_any_window(Date d, std::span<const Date> starts, int length_after) {
  for (Date u : starts) {
    if (d >= u && d <= add_days(u, length_after)) return true;
  }
  return false;
}

struct WindowSplit {
  std::vector<DatedDelta> collab;
  std::vector<DatedDelta> non_collab;
};

// Deltas dated on a collaboration upload day or within `window` days after it
// are collaboration samples; overlapping windows merge.
inline WindowSplit subscriber_window_split(const PopularitySeries& series, std::span<const Date> collab_dates,
                                           int window = 2, Metric m = Metric::subscribers) {
  WindowSplit out;
  for (const auto& d : daily_deltas(series, m)) {
    (in_any_window(d.date, collab_dates, window) ? out.collab : out.non_collab).push_back(d);
  }
  return out;
}

// Collaboration dates on which exactly one video was uploaded.
inline std::vector<Date> clean_collab_days(std::span<const Date> collab_dates, std::span<const Date> upload_dates) {
  std::map<Date, std::size_t> uploads;
  for (Date d : upload_dates) ++uploads[d];
  std::vector<Date> out;
  for (Date d : collab_dates) {
    const auto it = uploads.find(d);
    if (it != uploads.end() && it->second == 1) out.push_back(d);
  }
  return out;
}

}  // namespace catana::analytics
