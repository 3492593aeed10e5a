#include <gtest/gtest.h>

#include <cmath>

#include "catana/analytics/growth.hpp"
#include "catana/analytics/studies.hpp"
#include "catana/util/random.hpp"

using namespace catana;
using namespace catana::analytics;

namespace {

const Date kDay0 = parse_date("2021-06-01");

Date day(int i) { return add_days(kDay0, i); }

PopularitySeries views_series(const std::vector<std::uint64_t>& views, int first = 0) {
  PopularitySeries s{"v", {}};
  for (std::size_t i = 0; i < views.size(); ++i) {
    s.samples.push_back({day(first + static_cast<int>(i)), views[i], std::nullopt, std::nullopt});
  }
  return s;
}

PopularitySeries subscriber_series(const std::vector<std::uint64_t>& subs) {
  PopularitySeries s{"c", {}};
  for (std::size_t i = 0; i < subs.size(); ++i) {
    s.samples.push_back({day(static_cast<int>(i)), 10 * subs[i], subs[i], std::nullopt});
  }
  return s;
}

// Channel whose daily deltas are base * noise, multiplied by `boost(k)` on
// the k-th day after each collaboration date.
template <typename Boost>
PopularitySeries simulated_channel(Rng& rng, int days, const std::vector<int>& collab_days, double base,
                                   double noise, Boost boost) {
  PopularitySeries s{"c", {}};
  double subs = 1000, views = 50000;
  for (int d = 0; d < days; ++d) {
    double factor = 1.0;
    for (int u : collab_days) {
      if (d >= u) factor = std::max(factor, boost(d - u));
    }
    subs += base * factor * rng.unit_lognormal(noise);
    views += 20 * base * factor * rng.unit_lognormal(noise);
    s.samples.push_back({day(d), static_cast<std::uint64_t>(std::llround(views)),
                         static_cast<std::uint64_t>(std::llround(subs)), std::nullopt});
  }
  return s;
}

}  // namespace

TEST(MaxViews, Examples) {
  std::vector<std::uint64_t> v;
  for (int i = 1; i <= 12; ++i) v.push_back(10 * i);
  EXPECT_EQ(max_views_window(views_series(v)), 120u);
  v.pop_back();
  EXPECT_FALSE(max_views_window(views_series(v)).has_value());
  EXPECT_EQ(max_views_window(views_series(std::vector<std::uint64_t>(15, 7))), 7u);
  EXPECT_EQ(max_views_window(views_series(std::vector<std::uint64_t>(12, 0))), 0u);
}

TEST(MaxViews, GapExcludes) {
  auto s = views_series(std::vector<std::uint64_t>(13, 5));
  s.samples.erase(s.samples.begin() + 4);
  EXPECT_FALSE(max_views_window(s).has_value());
  EXPECT_FALSE(daily_gradients(s).has_value());
}

TEST(Gradients, Examples) {
  const auto g = daily_gradients(views_series({0, 10, 30, 60, 100, 150, 210, 280, 360, 450, 550, 660}));
  ASSERT_TRUE(g.has_value());
  ASSERT_EQ(g->size(), 11u);
  EXPECT_DOUBLE_EQ((*g)[0], 10);
  EXPECT_DOUBLE_EQ((*g)[1], 20);
  const auto flat = daily_gradients(views_series(std::vector<std::uint64_t>(12, 9)));
  EXPECT_EQ(*flat, std::vector<double>(11, 0.0));
}

TEST(Gradients, MatchIndependentDifferences) {
  Rng rng(2);
  for (int t = 0; t < 200; ++t) {
    std::vector<std::uint64_t> v{rng.below(1000)};
    const int n = 12 + static_cast<int>(rng.below(10));
    for (int i = 1; i < n; ++i) v.push_back(v.back() + rng.below(500));
    const auto g = daily_gradients(views_series(v));
    ASSERT_TRUE(g.has_value());
    double sum = 0;
    for (std::size_t i = 0; i < 11; ++i) {
      EXPECT_DOUBLE_EQ((*g)[i], static_cast<double>(v[i + 1] - v[i]));
      EXPECT_GE((*g)[i], 0.0);
      sum += (*g)[i];
    }
    EXPECT_DOUBLE_EQ(sum, static_cast<double>(v[11] - v[0]));
  }
}

TEST(PctGrowth, Examples) {
  EXPECT_DOUBLE_EQ(*pct_growth(100, 200), 100.0);
  EXPECT_NEAR(*pct_growth(100, 0.3), -99.7, 1e-12);
  EXPECT_DOUBLE_EQ(*pct_growth(37, 37), 0.0);
  EXPECT_FALSE(pct_growth(0, 5).has_value());
}

TEST(PctGrowth, StrictlyIncreasing) {
  Rng rng(6);
  for (int t = 0; t < 1000; ++t) {
    const double b = rng.uniform(0.01, 1000), x = rng.uniform(-100, 1000), dx = rng.uniform(1e-3, 10);
    EXPECT_LT(*pct_growth(b, x), *pct_growth(b, x + dx));
    EXPECT_DOUBLE_EQ(*pct_growth(b, b), 0.0);
  }
}

TEST(ChannelGrowthFactor, Examples) {
  const std::vector<double> non{100, 100}, col{150};
  EXPECT_DOUBLE_EQ(*channel_growth_factor(col, non), 50.0);
  EXPECT_DOUBLE_EQ(*channel_growth_factor(non, non), 0.0);
  EXPECT_FALSE(channel_growth_factor(col, {}).has_value());
  EXPECT_FALSE(channel_growth_factor({}, non).has_value());
}

TEST(MeanCi, Examples) {
  const std::vector<double> ones{1, 1, 1, 1};
  const auto a = mean_ci(ones);
  EXPECT_DOUBLE_EQ(a.mean, 1.0);
  EXPECT_DOUBLE_EQ(a.low, 1.0);
  EXPECT_DOUBLE_EQ(a.high, 1.0);

  const std::vector<double> two{0, 2};
  const auto b = mean_ci(two, 0.95);
  EXPECT_DOUBLE_EQ(b.mean, 1.0);
  EXPECT_NEAR(b.low, -11.706, 1e-3);
  EXPECT_NEAR(b.high, 13.706, 1e-3);
  EXPECT_NEAR(t_quantile(0.95, 1), 12.7062, 1e-4);
  EXPECT_NEAR(t_quantile(0.99, 1), 63.6567, 1e-4);

  const std::vector<double> xs{3, 7, 8, 1, 4}, doubled{6, 14, 16, 2, 8};
  const auto c = mean_ci(xs, 0.99), d = mean_ci(doubled, 0.99);
  EXPECT_NEAR(d.mean, 2 * c.mean, 1e-12);
  EXPECT_NEAR(d.low, 2 * c.low, 1e-12);
  EXPECT_NEAR(d.high, 2 * c.high, 1e-12);

  EXPECT_THROW(mean_ci(std::vector<double>{1.0}), ContractError);
}

TEST(MeanCi, WidthShrinksWithN) {
  // Alternating +-1 samples of even length n have sd sqrt(n / (n - 1)).
  double prev = INFINITY;
  for (std::size_t n = 2; n <= 60; n += 2) {
    std::vector<double> xs;
    for (std::size_t i = 0; i < n; ++i) xs.push_back(i % 2 ? 1.0 : -1.0);
    const auto ci = mean_ci(xs);
    const double width = ci.high - ci.low;
    EXPECT_LE(width, prev);
    const double sd = std::sqrt(static_cast<double>(n) / static_cast<double>(n - 1));
    EXPECT_NEAR(width, 2 * t_quantile(0.95, n - 1) * sd / std::sqrt(static_cast<double>(n)), 1e-12);
    prev = width;
  }
}

TEST(GrowthStats, Fields) {
  const std::vector<double> xs{4, 1, 3, 2};
  const auto g = growth_stats(xs, 0.99);
  EXPECT_EQ(g.sample_count, 4u);
  EXPECT_DOUBLE_EQ(g.mean, 2.5);
  EXPECT_DOUBLE_EQ(g.median, 2.5);
  EXPECT_DOUBLE_EQ(g.p75, 3.25);
  EXPECT_DOUBLE_EQ(g.min, 1);
  EXPECT_DOUBLE_EQ(g.max, 4);
  EXPECT_LE(g.ci_low, g.mean);
  EXPECT_GE(g.ci_high, g.mean);
  EXPECT_DOUBLE_EQ(g.ci_level, 0.99);
  const std::vector<double> same{5, 5, 5};
  const auto z = growth_stats(same);
  EXPECT_DOUBLE_EQ(z.ci_high - z.ci_low, 0.0);
}

TEST(WindowSplit, Examples) {
  // Ten daily samples on days 1..10 give deltas dated 2..10.
  PopularitySeries s{"c", {}};
  for (int d = 1; d <= 10; ++d) s.samples.push_back({day(d), 0, static_cast<std::uint64_t>(d * d), std::nullopt});
  const std::vector<Date> one{day(5)};
  const auto a = subscriber_window_split(s, one, 2);
  ASSERT_EQ(a.collab.size(), 3u);
  EXPECT_EQ(a.collab[0].date, day(5));
  EXPECT_EQ(a.collab[2].date, day(7));
  EXPECT_DOUBLE_EQ(a.collab[0].delta, 25 - 16);
  EXPECT_EQ(a.non_collab.size(), 6u);

  const auto none = subscriber_window_split(s, {}, 2);
  EXPECT_TRUE(none.collab.empty());
  EXPECT_EQ(none.non_collab.size(), 9u);

  const std::vector<Date> two{day(5), day(6)};
  const auto b = subscriber_window_split(s, two, 2);
  ASSERT_EQ(b.collab.size(), 4u);
  EXPECT_EQ(b.collab.front().date, day(5));
  EXPECT_EQ(b.collab.back().date, day(8));
}

TEST(WindowSplit, PartitionsDays) {
  Rng rng(10);
  for (int t = 0; t < 200; ++t) {
    PopularitySeries s{"c", {}};
    std::uint64_t subs = 0;
    for (int d = 0; d < 40; ++d) {
      subs += rng.below(20);
      if (rng.bernoulli(0.9)) s.samples.push_back({day(d), 0, subs, std::nullopt});
    }
    std::vector<Date> collabs;
    for (int k = 0; k < 4; ++k) collabs.push_back(day(static_cast<int>(rng.below(40))));
    const auto split = subscriber_window_split(s, collabs, static_cast<int>(1 + rng.below(4)));
    const auto all = daily_deltas(s, Metric::subscribers);
    std::set<Date> seen;
    for (const auto& d : split.collab) EXPECT_TRUE(seen.insert(d.date).second);
    for (const auto& d : split.non_collab) EXPECT_TRUE(seen.insert(d.date).second);
    EXPECT_EQ(seen.size(), all.size());
  }
}

TEST(CleanCollabDays, Examples) {
  const std::vector<Date> collab{day(3)};
  const std::vector<Date> busy{day(3), day(3), day(5)};
  EXPECT_TRUE(clean_collab_days(collab, busy).empty());
  const std::vector<Date> sole{day(3), day(4)};
  EXPECT_EQ(clean_collab_days(collab, sole), collab);
  EXPECT_TRUE(clean_collab_days({}, sole).empty());
}

TEST(EffectHorizon, ConstantDeltasGiveZero) {
  std::vector<ChannelTimeline> chans;
  for (int c = 0; c < 3; ++c) {
    std::vector<std::uint64_t> subs;
    for (int d = 0; d < 40; ++d) subs.push_back(100 + 5 * static_cast<std::uint64_t>(d));
    chans.push_back({"c" + std::to_string(c), subscriber_series(subs), {day(10), day(25)}});
  }
  const auto rows = effect_horizon(chans, 6);
  std::size_t day_rows = 0;
  for (const auto& r : rows) {
    if (r.day == "baseline") continue;
    ++day_rows;
    EXPECT_DOUBLE_EQ(r.stats.mean, 0.0);
    EXPECT_DOUBLE_EQ(r.stats.ci_low, 0.0);
    EXPECT_DOUBLE_EQ(r.stats.ci_high, 0.0);
  }
  EXPECT_EQ(day_rows, 12u);
}

TEST(EffectHorizon, DecayingBoostIsVisible) {
  Rng rng(99);
  std::vector<ChannelTimeline> chans;
  for (int c = 0; c < 30; ++c) {
    const std::vector<int> collab{20, 50};
    auto s = simulated_channel(rng, 80, collab, 50, 0.3, [](int k) { return k <= 2 ? 3.0 - k : 1.0; });
    chans.push_back({"c" + std::to_string(c), s, {day(20), day(50)}});
  }
  const auto rows = effect_horizon(chans, 6);
  std::map<std::string, double> subs;
  for (const auto& r : rows) {
    if (r.metric == Metric::subscribers) subs[r.day] = r.stats.mean;
  }
  EXPECT_GT(subs.at("0"), subs.at("4"));
  EXPECT_GT(subs.at("1"), subs.at("5"));
  EXPECT_NEAR(subs.at("0"), 200.0, 25.0);
  EXPECT_TRUE(subs.count("baseline"));
}

TEST(EffectHorizon, NullModelCoverage) {
  Rng rng(1234);
  std::vector<int> covered(6, 0);
  for (int seed = 0; seed < 100; ++seed) {
    std::vector<ChannelTimeline> chans;
    for (int c = 0; c < 30; ++c) {
      const std::vector<int> collab{15, 40, 60};
      auto s = simulated_channel(rng, 80, collab, 50, 0.3, [](int) { return 1.0; });
      chans.push_back({"c", s, {day(15), day(40), day(60)}});
    }
    for (const auto& r : effect_horizon(chans, 6)) {
      if (r.metric != Metric::subscribers || r.day == "baseline") continue;
      if (r.stats.ci_low <= 0.0 && 0.0 <= r.stats.ci_high) ++covered[static_cast<std::size_t>(std::stoi(r.day))];
    }
  }
  for (int c : covered) EXPECT_GE(c, 90);
}

TEST(ImpactByGroup, PlantedClassPair) {
  Rng rng(7);
  SeriesMap series;
  std::map<std::string, std::vector<Date>> uploads;
  std::map<std::string, std::string> labels;
  std::vector<CollabEvent> events;
  for (int i = 0; i < 25; ++i) {
    const std::string guest = "g" + std::to_string(i), host = "h" + std::to_string(i);
    labels[guest] = "1";
    labels[host] = "3";
    const int u = 10 + static_cast<int>(rng.below(30));
    events.push_back({guest, host, day(u)});
    auto gs = simulated_channel(rng, 60, {u}, 40, 0.2, [](int k) { return k <= 2 ? 2.0 : 1.0; });
    auto hs = simulated_channel(rng, 60, {u}, 40, 0.2, [](int) { return 1.0; });
    gs.subject_id = guest;
    hs.subject_id = host;
    series[guest] = gs;
    series[host] = hs;
    uploads[host] = {day(u), day(u + 7)};
    uploads[guest] = {day(u + 3)};
  }
  const auto rows = impact_by_group(events, {&series, &uploads, &labels, 2, 0.95});
  bool found = false;
  for (const auto& r : rows) {
    EXPECT_EQ(r.guest_group, "1");
    EXPECT_EQ(r.host_group, "3");
    if (r.side == "guest" && r.metric == Metric::subscribers) {
      found = true;
      EXPECT_EQ(r.stats.sample_count, 25u);
      EXPECT_LE(r.stats.ci_low, 100.0);
      EXPECT_GE(r.stats.ci_high, 100.0);
    }
    if (r.side == "host") {
      EXPECT_LE(r.stats.ci_low, 0.0);
      EXPECT_GE(r.stats.ci_high, 0.0);
    }
  }
  EXPECT_TRUE(found);
}

TEST(ImpactByGroup, CleanDayFilterAndEdgeCases) {
  SeriesMap series;
  std::map<std::string, std::vector<Date>> uploads;
  std::map<std::string, std::string> labels;
  std::vector<std::uint64_t> subs;
  for (int d = 0; d < 30; ++d) subs.push_back(static_cast<std::uint64_t>(d * 3 + (d % 2)));
  for (const char* c : {"A", "B", "C"}) {
    series[c] = subscriber_series(subs);
    labels[c] = "only";
  }
  EXPECT_TRUE(impact_by_group({}, {&series, &uploads, &labels, 2, 0.95}).empty());

  // Host uploads twice on both collaboration days: only guest rows survive.
  uploads["B"] = {day(10), day(10), day(20), day(20)};
  const std::vector<CollabEvent> events{{"A", "B", day(10)}, {"C", "B", day(20)}};
  const auto rows = impact_by_group(events, {&series, &uploads, &labels, 2, 0.95});
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.side, "guest");
    EXPECT_EQ(r.guest_group, "only");
    EXPECT_EQ(r.stats.sample_count, 2u);
  }
}
