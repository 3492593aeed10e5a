#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "catana/core/error.hpp"
#include "catana/core/types.hpp"

namespace catana {

struct PopularityClass {
  int class_index;
  std::uint64_t lower;  // inclusive
  std::uint64_t upper;  // exclusive
};

// Subscriber bands; together they partition [0, 1e8).
inline constexpr std::array<PopularityClass, 7> kPopularityClasses{{
    {0, 0, 1'000},
    {1, 1'000, 10'000},
    {2, 10'000, 100'000},
    {3, 100'000, 1'000'000},
    {4, 1'000'000, 10'000'000},
    {5, 10'000'000, 50'000'000},
    {6, 50'000'000, 100'000'000},
}};

inline int popularity_class(std::uint64_t subscribers) {
  for (const auto& c : kPopularityClasses) {
    if (subscribers >= c.lower && subscribers < c.upper) return c.class_index;
  }
  throw ContractError("subscriber count " + std::to_string(subscribers) +
                      " is outside every popularity class (>= 1e8)");
}

enum class SubjectKind { unknown, video, channel };

struct SeriesViolation {
  Date date;
  std::string rule;

  bool operator==(const SeriesViolation&) const = default;
};

// Checks the PopularitySeries invariants. Never throws.
inline std::vector<SeriesViolation> validate_series(const PopularitySeries& series,
                                                    SubjectKind kind = SubjectKind::unknown) {
  std::vector<SeriesViolation> out;
  const auto& s = series.samples;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (kind == SubjectKind::video && s[i].subscribers) {
      out.push_back({s[i].date, "subscribers-on-video"});
    }
    if (i == 0) continue;
    if (s[i].date == s[i - 1].date) {
      out.push_back({s[i].date, "duplicate-date"});
    } else if (s[i].date < s[i - 1].date) {
      out.push_back({s[i].date, "non-increasing-date"});
    }
    if (s[i].views < s[i - 1].views) out.push_back({s[i].date, "non-monotone views"});
  }
  return out;
}

}  // namespace catana
