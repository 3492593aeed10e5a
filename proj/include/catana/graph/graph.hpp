#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "catana/core/error.hpp"
#include "catana/core/types.hpp"
#include "catana/identity/identity.hpp"

namespace catana::graph {

using Edge = std::pair<std::string, std::string>;

// Directed, weighted. An edge A -> B of weight w: creators of A were seen in
// w (identity, video) pairs on B.
class CollaborationGraph {
 public:
  void add_node(const std::string& id) { nodes_.insert(id); }

  void add_edge(const std::string& origin, const std::string& destination, std::uint64_t weight = 1) {
    if (origin == destination) throw ContractError("self-loop on " + origin);
    if (weight == 0) throw ContractError("edge weight must be positive");
    nodes_.insert(origin);
    nodes_.insert(destination);
    edges_[{origin, destination}] += weight;
  }

  std::uint64_t weight(const std::string& origin, const std::string& destination) const {
    const auto it = edges_.find({origin, destination});
    return it == edges_.end() ? 0 : it->second;
  }

  std::uint64_t total_weight() const {
    std::uint64_t s = 0;
    for (const auto& [e, w] : edges_) s += w;
    return s;
  }

  const std::set<std::string>& nodes() const { return nodes_; }
  const std::map<Edge, std::uint64_t>& edges() const { return edges_; }

  // Subgraph induced by `keep`.
  CollaborationGraph induced(const std::set<std::string>& keep) const {
    CollaborationGraph g;
    for (const auto& n : nodes_) {
      if (keep.count(n)) g.add_node(n);
    }
    for (const auto& [e, w] : edges_) {
      if (keep.count(e.first) && keep.count(e.second)) g.add_edge(e.first, e.second, w);
    }
    return g;
  }

  bool operator==(const CollaborationGraph&) const = default;

 private:
  std::set<std::string> nodes_;
  std::map<Edge, std::uint64_t> edges_;
};

// Edges stored once with first < second.
class UndirectedGraph {
 public:
  void add_node(const std::string& id) { nodes_.insert(id); }

  void add_edge(const std::string& a, const std::string& b) {
    if (a == b) return;
    nodes_.insert(a);
    nodes_.insert(b);
    edges_.insert(a < b ? Edge{a, b} : Edge{b, a});
  }

  bool has_edge(const std::string& a, const std::string& b) const {
    return edges_.count(a < b ? Edge{a, b} : Edge{b, a}) > 0;
  }

  const std::set<std::string>& nodes() const { return nodes_; }
  const std::set<Edge>& edges() const { return edges_; }

  UndirectedGraph induced(const std::set<std::string>& keep) const {
    UndirectedGraph g;
    for (const auto& n : nodes_) {
      if (keep.count(n)) g.add_node(n);
    }
    for (const auto& e : edges_) {
      if (keep.count(e.first) && keep.count(e.second)) g.add_edge(e.first, e.second);
    }
    return g;
  }

  bool operator==(const UndirectedGraph&) const = default;

 private:
  std::set<std::string> nodes_;
  std::set<Edge> edges_;
};

struct Collaboration {
  std::string identity_id;
  std::string video_id;
  std::string origin;       // creator's home channel
  std::string destination;  // channel owning the video

  bool operator==(const Collaboration&) const = default;
};

struct BuiltGraph {
  CollaborationGraph graph;
  std::vector<Collaboration> collaborations;
};

// One collaboration per (identity, video) where the video's channel differs
// from the identity's creator channel. Every channel that owns a video is a node.
inline BuiltGraph build_graph(std::span<const identity::Identity> identities, std::span<const VideoRecord> videos) {
  BuiltGraph out;
  std::map<std::string, const VideoRecord*> by_id;
  for (const auto& v : videos) {
    by_id[v.video_id] = &v;
    out.graph.add_node(v.channel_id);
  }
  for (const auto& person : identities) {
    if (person.creator_channel.empty()) {
      throw ContractError("identity " + person.identity_id + " has no creator channel");
    }
    out.graph.add_node(person.creator_channel);
    std::set<std::string> seen;
    for (const auto& vid : person.videos) {
      if (!seen.insert(vid).second) continue;
      const auto it = by_id.find(vid);
      if (it == by_id.end()) throw ContractError("identity " + person.identity_id + " references unknown video " + vid);
      const auto& host = it->second->channel_id;
      if (host == person.creator_channel) continue;
      out.graph.add_edge(person.creator_channel, host);
      out.collaborations.push_back({person.identity_id, vid, person.creator_channel, host});
    }
  }
  return out;
}

// Undirected edge A - B iff A features B and B features A.
inline UndirectedGraph mutual_featured_subgraph(std::span<const ChannelRecord> channels) {
  std::set<Edge> listed;
  UndirectedGraph g;
  for (const auto& c : channels) {
    g.add_node(c.channel_id);
    for (const auto& f : c.featured_channels) {
      if (f != c.channel_id) listed.insert({c.channel_id, f});
    }
  }
  for (const auto& [a, b] : listed) {
    if (a < b && listed.count({b, a}) && g.nodes().count(b)) g.add_edge(a, b);
  }
  return g;
}

// Undirected edge whenever either side features the other.
inline UndirectedGraph featured_graph(std::span<const ChannelRecord> channels) {
  UndirectedGraph g;
  for (const auto& c : channels) g.add_node(c.channel_id);
  for (const auto& c : channels) {
    for (const auto& f : c.featured_channels) {
      if (g.nodes().count(f)) g.add_edge(c.channel_id, f);
    }
  }
  return g;
}

// Node set of the largest connected component, ignoring edge direction. On a
// size tie the component holding the smallest node id wins.
inline std::set<std::string> largest_component_nodes(const std::set<std::string>& nodes,
                                                     const std::vector<Edge>& edges) {
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::set<std::string> visited, best;
  for (const auto& start : nodes) {
    if (visited.count(start)) continue;
    std::set<std::string> comp{start};
    std::queue<std::string> todo;
    todo.push(start);
    visited.insert(start);
    while (!todo.empty()) {
      const auto cur = todo.front();
      todo.pop();
      for (const auto& nb : adj[cur]) {
        if (visited.insert(nb).second) {
          comp.insert(nb);
          todo.push(nb);
        }
      }
    }
    // Components are discovered in order of their smallest id, so strict >
    // keeps the earlier one on ties.
    if (comp.size() > best.size()) best = std::move(comp);
  }
  return best;
}

inline CollaborationGraph largest_connected_component(const CollaborationGraph& g) {
  std::vector<Edge> edges;
  for (const auto& [e, w] : g.edges()) edges.push_back(e);
  return g.induced(largest_component_nodes(g.nodes(), edges));
}

inline UndirectedGraph largest_connected_component(const UndirectedGraph& g) {
  return g.induced(largest_component_nodes(g.nodes(), {g.edges().begin(), g.edges().end()}));
}

struct ChannelCollabStats {
  std::string channel_id;
  std::uint64_t internal = 0;  // k: in-edge weight sum
  std::uint64_t external = 0;  // out-edge weight sum
  std::uint64_t video_count = 0;
  std::optional<double> ratio;  // k / v, absent when v = 0

  bool operator==(const ChannelCollabStats&) const = default;
};

inline std::vector<ChannelCollabStats> channel_stats(const CollaborationGraph& g,
                                                     std::span<const ChannelRecord> channels) {
  std::map<std::string, std::uint64_t> in, out;
  for (const auto& [e, w] : g.edges()) {
    out[e.first] += w;
    in[e.second] += w;
  }
  std::vector<ChannelCollabStats> stats;
  for (const auto& c : channels) {
    ChannelCollabStats s;
    s.channel_id = c.channel_id;
    s.internal = in.count(c.channel_id) ? in[c.channel_id] : 0;
    s.external = out.count(c.channel_id) ? out[c.channel_id] : 0;
    s.video_count = c.video_count;
    if (c.video_count > 0) s.ratio = static_cast<double>(s.internal) / static_cast<double>(c.video_count);
    stats.push_back(std::move(s));
  }
  return stats;
}

}  // namespace catana::graph
