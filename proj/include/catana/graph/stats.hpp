#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "catana/core/error.hpp"
#include "catana/core/json_io.hpp"
#include "catana/core/popularity.hpp"
#include "catana/core/types.hpp"
#include "catana/graph/graph.hpp"
#include "catana/util/order_stats.hpp"

namespace catana::graph {

struct SummaryStats {
  std::size_t count = 0;
  double sum = 0, mean = 0, median = 0, p75 = 0, min = 0, max = 0;
};

inline SummaryStats summary_stats(std::span<const double> values) {
  if (values.empty()) throw ContractError("summary_stats of an empty list");
  std::vector<double> s(values.begin(), values.end());
  std::sort(s.begin(), s.end());
  SummaryStats out;
  out.count = s.size();
  for (double x : s) out.sum += x;
  out.mean = out.sum / static_cast<double>(s.size());
  out.median = percentile_sorted(s, 0.5);
  out.p75 = percentile_sorted(s, 0.75);
  out.min = s.front();
  out.max = s.back();
  return out;
}

inline std::vector<double> edge_weights(const CollaborationGraph& g) {
  std::vector<double> w;
  for (const auto& [e, x] : g.edges()) w.push_back(static_cast<double>(x));
  return w;
}

inline const std::string kUnknownGroup = "None";

enum class MatrixMode { count, row_percent };

// Rows are origin groups, columns destination groups.
struct GroupMatrix {
  std::vector<std::string> groups;
  std::vector<std::vector<double>> values;

  double at(const std::string& from, const std::string& to) const {
    const auto f = std::find(groups.begin(), groups.end(), from);
    const auto t = std::find(groups.begin(), groups.end(), to);
    if (f == groups.end() || t == groups.end()) return 0.0;
    return values[static_cast<std::size_t>(f - groups.begin())][static_cast<std::size_t>(t - groups.begin())];
  }

  double total() const {
    double s = 0;
    for (const auto& row : values) {
      for (double v : row) s += v;
    }
    return s;
  }
};

inline GroupMatrix group_matrix(const CollaborationGraph& g, const std::map<std::string, std::string>& labels,
                                MatrixMode mode = MatrixMode::count) {
  auto label_of = [&](const std::string& node) {
    const auto it = labels.find(node);
    return it == labels.end() || it->second.empty() ? kUnknownGroup : it->second;
  };
  std::set<std::string> group_set;
  for (const auto& n : g.nodes()) group_set.insert(label_of(n));
  GroupMatrix m;
  m.groups.assign(group_set.begin(), group_set.end());
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < m.groups.size(); ++i) index[m.groups[i]] = i;
  m.values.assign(m.groups.size(), std::vector<double>(m.groups.size(), 0.0));
  for (const auto& [e, w] : g.edges()) {
    m.values[index[label_of(e.first)]][index[label_of(e.second)]] += static_cast<double>(w);
  }
  if (mode == MatrixMode::row_percent) {
    for (auto& row : m.values) {
      double s = 0;
      for (double v : row) s += v;
      if (s > 0) {
        for (double& v : row) v = 100.0 * v / s;
      }
    }
  }
  return m;
}

inline std::map<std::string, std::string> mcn_labels(std::span<const ChannelRecord> channels) {
  std::map<std::string, std::string> out;
  for (const auto& c : channels) out[c.channel_id] = c.mcn.value_or(kUnknownGroup);
  return out;
}

inline std::map<std::string, std::string> category_labels(std::span<const ChannelRecord> channels) {
  std::map<std::string, std::string> out;
  for (const auto& c : channels) out[c.channel_id] = c.category.empty() ? kUnknownGroup : c.category;
  return out;
}

// Popularity class from the subscriber count of the last snapshot that has one.
inline std::map<std::string, std::string> popclass_labels(const std::map<std::string, PopularitySeries>& series) {
  std::map<std::string, std::string> out;
  for (const auto& [id, s] : series) {
    for (auto it = s.samples.rbegin(); it != s.samples.rend(); ++it) {
      if (it->subscribers && *it->subscribers < kPopularityClasses.back().upper) {
        out[id] = std::to_string(popularity_class(*it->subscribers));
        break;
      }
    }
  }
  return out;
}

}  // namespace catana::graph
