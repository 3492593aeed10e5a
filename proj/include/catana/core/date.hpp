#pragma once

#include <chrono>
#include <cstdio>
#include <string>
#include <string_view>

#include "catana/core/error.hpp"

namespace catana {

using Date = std::chrono::sys_days;

// Parses "YYYY-MM-DD". Rejects anything else, including invalid calendar days.
inline Date parse_date(std::string_view text) {
  int y = 0;
  unsigned m = 0, d = 0;
  char tail = 0;
  const std::string buf(text);
  if (buf.size() != 10 || std::sscanf(buf.c_str(), "%4d-%2u-%2u%c", &y, &m, &d, &tail) != 3) {
    throw ContractError("malformed date '" + buf + "', expected YYYY-MM-DD");
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                        std::chrono::day{d}};
  if (!ymd.ok()) throw ContractError("invalid calendar date '" + buf + "'");
  return Date{ymd};
}

inline std::string format_date(Date date) {
  const std::chrono::year_month_day ymd{date};
  char out[16];
  std::snprintf(out, sizeof out, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return out;
}

inline Date add_days(Date date, long days) { return date + std::chrono::days{days}; }

inline long days_between(Date from, Date to) { return (to - from).count(); }

inline Date today_utc() {
  return std::chrono::floor<std::chrono::days>(std::chrono::system_clock::now());
}

}  // namespace catana
