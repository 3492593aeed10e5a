#pragma once

// HDBSCAN over any DistanceSource:
//   core distances -> mutual-reachability MST (dense Prim) -> single-linkage
//   hierarchy -> condensed tree -> excess-of-mass cluster selection.
//
// Density levels are lambda = 1 / distance; a zero distance gives an infinite
// lambda, which the stability and probability code treats explicitly.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "catana/cluster/distance.hpp"
#include "catana/cluster/result.hpp"
#include "catana/core/error.hpp"

namespace catana::cluster {

struct WeightedEdge {
  std::size_t i;  // i < j
  std::size_t j;
  double weight;

  bool operator==(const WeightedEdge&) const = default;
};

// Distance to the k-th nearest neighbour, each point being its own first.
template <DistanceSource D>
std::vector<double> core_distances(const D& dist, std::size_t k) {
  const std::size_t n = dist.size();
  if (k < 1) throw ContractError("core_distances: k must be at least 1");
  if (k > n) throw ContractError("core_distances: k exceeds the point count");
  std::vector<double> core(n);
  std::vector<double> row(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) row[j] = i == j ? 0.0 : dist.distance(i, j);
    std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k - 1), row.end());
    core[i] = row[k - 1];
  }
  return core;
}

inline double mutual_reachability(double d, double core_i, double core_j) {
  return std::max({d, core_i, core_j});
}

// Minimum spanning tree of the complete mutual-reachability graph, by dense
// Prim in O(n^2) time and O(n) extra space. Ties prefer the lowest index.
// Edges come back sorted by (weight, i, j).
template <DistanceSource D>
std::vector<WeightedEdge> mutual_reachability_mst(const D& dist, const std::vector<double>& core) {
  const std::size_t n = dist.size();
  if (core.size() != n) throw ContractError("core distance count does not match point count");
  std::vector<WeightedEdge> edges;
  if (n < 2) return edges;

  constexpr auto kNone = std::numeric_limits<std::size_t>::max();
  std::vector<bool> in_tree(n, false);
  std::vector<double> key(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> parent(n, kNone);
  edges.reserve(n - 1);

  std::size_t current = 0;
  in_tree[0] = true;
  for (std::size_t step = 1; step < n; ++step) {
    std::size_t next = kNone;
    for (std::size_t v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      const double w = mutual_reachability(dist.distance(current, v), core[current], core[v]);
      if (w < key[v] || (w == key[v] && current < parent[v])) {
        key[v] = w;
        parent[v] = current;
      }
      if (next == kNone || key[v] < key[next]) next = v;
    }
    in_tree[next] = true;
    edges.push_back({std::min(parent[next], next), std::max(parent[next], next), key[next]});
    current = next;
  }
  std::sort(edges.begin(), edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    if (a.weight != b.weight) return a.weight < b.weight;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  return edges;
}

// Agglomerative merge k creates node n + k from two existing nodes.
struct Merge {
  std::size_t left;
  std::size_t right;
  double distance;
  std::size_t size;
};

struct SingleLinkageTree {
  std::size_t point_count = 0;
  std::vector<Merge> merges;  // point_count - 1 entries when point_count >= 1

  std::size_t root() const { return point_count + merges.size() - 1; }
  std::size_t node_size(std::size_t node) const {
    return node < point_count ? 1 : merges[node - point_count].size;
  }
};

// Edges must already be sorted by weight (mutual_reachability_mst does this).
inline SingleLinkageTree single_linkage(std::size_t n, const std::vector<WeightedEdge>& sorted_edges) {
  if (n > 0 && sorted_edges.size() != n - 1) throw ContractError("spanning tree needs n - 1 edges");
  SingleLinkageTree tree;
  tree.point_count = n;
  if (n == 0) return tree;
  std::vector<std::size_t> uf(2 * n - 1);
  std::iota(uf.begin(), uf.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (uf[x] != x) {
      uf[x] = uf[uf[x]];
      x = uf[x];
    }
    return x;
  };
  for (const auto& e : sorted_edges) {
    const std::size_t a = find(e.i);
    const std::size_t b = find(e.j);
    if (a == b) throw ContractError("edge list contains a cycle");
    const std::size_t node = n + tree.merges.size();
    tree.merges.push_back({a, b, e.weight, tree.node_size(a) + tree.node_size(b)});
    uf[a] = uf[b] = node;
  }
  return tree;
}

struct CondensedRow {
  std::size_t parent;  // cluster label (>= point_count)
  std::size_t child;   // point index (< point_count) or cluster label
  double lambda;
  std::size_t child_size;
};

struct CondensedTree {
  std::size_t point_count = 0;
  std::size_t cluster_end = 0;  // cluster labels are [point_count, cluster_end)
  std::vector<CondensedRow> rows;

  std::size_t root() const { return point_count; }
};

inline double lambda_of(double distance) {
  return distance > 0.0 ? 1.0 / distance : std::numeric_limits<double>::infinity();
}

inline CondensedTree condense_tree(const SingleLinkageTree& slt, std::size_t min_cluster_size) {
  const std::size_t n = slt.point_count;
  CondensedTree ct;
  ct.point_count = n;
  ct.cluster_end = n + 1;
  if (n < 2) return ct;

  const std::size_t total = 2 * n - 1;
  std::vector<std::size_t> relabel(total, 0);
  std::vector<bool> ignore(total, false);
  const std::size_t root = slt.root();
  relabel[root] = n;

  // Emits every point under `node` as falling out of `parent_label` at lambda.
  auto drop_subtree = [&](std::size_t node, std::size_t parent_label, double lambda) {
    std::vector<std::size_t> stack{node};
    while (!stack.empty()) {
      const std::size_t x = stack.back();
      stack.pop_back();
      ignore[x] = true;
      if (x < n) {
        ct.rows.push_back({parent_label, x, lambda, 1});
      } else {
        const auto& m = slt.merges[x - n];
        stack.push_back(m.right);
        stack.push_back(m.left);
      }
    }
  };

  std::vector<std::size_t> queue{root};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t node = queue[head];
    if (node < n) continue;
    const auto& m = slt.merges[node - n];
    queue.push_back(m.left);
    queue.push_back(m.right);
    if (ignore[node]) continue;

    const double lambda = lambda_of(m.distance);
    const std::size_t left_size = slt.node_size(m.left);
    const std::size_t right_size = slt.node_size(m.right);
    const std::size_t label = relabel[node];
    const bool left_big = left_size >= min_cluster_size;
    const bool right_big = right_size >= min_cluster_size;

    if (left_big && right_big) {
      relabel[m.left] = ct.cluster_end++;
      ct.rows.push_back({label, relabel[m.left], lambda, left_size});
      relabel[m.right] = ct.cluster_end++;
      ct.rows.push_back({label, relabel[m.right], lambda, right_size});
    } else if (!left_big && !right_big) {
      drop_subtree(m.left, label, lambda);
      drop_subtree(m.right, label, lambda);
    } else if (!left_big) {
      relabel[m.right] = label;
      drop_subtree(m.left, label, lambda);
    } else {
      relabel[m.left] = label;
      drop_subtree(m.right, label, lambda);
    }
  }
  return ct;
}

// Excess-of-mass stability per cluster label (indexed by label - point_count).
inline std::vector<double> cluster_stabilities(const CondensedTree& ct) {
  const std::size_t n = ct.point_count;
  const std::size_t clusters = ct.cluster_end - n;
  std::vector<double> birth(clusters, 0.0);
  for (const auto& r : ct.rows) {
    if (r.child >= n) birth[r.child - n] = r.lambda;
  }
  std::vector<double> stability(clusters, 0.0);
  for (const auto& r : ct.rows) {
    const double b = birth[r.parent - n];
    if (r.lambda != b) stability[r.parent - n] += (r.lambda - b) * static_cast<double>(r.child_size);
  }
  return stability;
}

struct SelectedClusters {
  std::vector<bool> selected;       // indexed by label - point_count
  std::vector<double> stabilities;  // unpropagated, indexed the same way
};

inline SelectedClusters select_clusters_eom(const CondensedTree& ct, bool allow_single_cluster) {
  const std::size_t n = ct.point_count;
  const std::size_t clusters = ct.cluster_end - n;
  SelectedClusters out;
  out.stabilities = cluster_stabilities(ct);
  out.selected.assign(clusters, true);
  if (clusters == 0) return out;

  std::vector<std::vector<std::size_t>> children(clusters);
  for (const auto& r : ct.rows) {
    if (r.child >= n) children[r.parent - n].push_back(r.child - n);
  }
  auto deselect_below = [&](std::size_t c) {
    std::vector<std::size_t> stack(children[c].begin(), children[c].end());
    while (!stack.empty()) {
      const std::size_t x = stack.back();
      stack.pop_back();
      out.selected[x] = false;
      stack.insert(stack.end(), children[x].begin(), children[x].end());
    }
  };

  // Children always carry larger labels than their parent.
  std::vector<double> propagated = out.stabilities;
  for (std::size_t c = clusters; c-- > 0;) {
    if (c == 0 && !allow_single_cluster) {
      out.selected[0] = false;
      break;
    }
    double child_sum = 0.0;
    for (std::size_t ch : children[c]) child_sum += propagated[ch];
    if (!children[c].empty() && child_sum > propagated[c]) {
      out.selected[c] = false;
      propagated[c] = child_sum;
    } else {
      deselect_below(c);
    }
  }
  return out;
}

inline ClusterResult label_points(const CondensedTree& ct, const SelectedClusters& sel) {
  const std::size_t n = ct.point_count;
  const std::size_t clusters = ct.cluster_end - n;
  constexpr auto kNone = std::numeric_limits<std::size_t>::max();

  std::vector<std::size_t> cluster_parent(clusters, kNone);
  std::vector<std::size_t> point_parent(n, kNone);
  std::vector<double> point_lambda(n, 0.0);
  std::vector<double> max_finite_lambda(clusters, 0.0);
  for (const auto& r : ct.rows) {
    if (r.child >= n) {
      cluster_parent[r.child - n] = r.parent - n;
    } else {
      point_parent[r.child] = r.parent - n;
      point_lambda[r.child] = r.lambda;
    }
    if (std::isfinite(r.lambda)) {
      max_finite_lambda[r.parent - n] = std::max(max_finite_lambda[r.parent - n], r.lambda);
    }
  }

  std::vector<int> label_of_cluster(clusters, kNoise);
  ClusterResult result;
  for (std::size_t c = 0; c < clusters; ++c) {
    if (!sel.selected[c]) continue;
    label_of_cluster[c] = static_cast<int>(result.stabilities.size());
    result.stabilities.push_back(sel.stabilities[c]);
  }

  result.labels.assign(n, kNoise);
  result.probabilities.assign(n, 0.0);
  for (std::size_t p = 0; p < n; ++p) {
    std::size_t c = point_parent[p];
    while (c != kNone && !sel.selected[c]) c = cluster_parent[c];
    if (c == kNone) continue;
    result.labels[p] = label_of_cluster[c];
    // Membership strength lambda_p / lambda_max over the selected cluster's
    // own rows. Points deeper in the subtree clamp to 1; infinite lambdas
    // (duplicate points) are full members.
    const double max_lambda = max_finite_lambda[c];
    const double lp = point_lambda[p];
    if (!std::isfinite(lp) || max_lambda <= 0.0) {
      result.probabilities[p] = 1.0;
    } else {
      result.probabilities[p] = std::min(lp, max_lambda) / max_lambda;
    }
  }
  return result;
}

template <DistanceSource D>
ClusterResult hdbscan(const D& dist, std::size_t min_cluster_size, std::size_t min_samples,
                      bool allow_single_cluster = false) {
  if (min_cluster_size < 2) throw ContractError("hdbscan: min_cluster_size must be >= 2");
  if (min_samples < 1) throw ContractError("hdbscan: min_samples must be >= 1");
  const std::size_t n = dist.size();
  if (n < min_cluster_size) {
    ClusterResult all_noise;
    all_noise.labels.assign(n, kNoise);
    all_noise.probabilities.assign(n, 0.0);
    return all_noise;
  }
  const auto core = core_distances(dist, std::min(min_samples, n));
  const auto mst = mutual_reachability_mst(dist, core);
  const auto slt = single_linkage(n, mst);
  const auto ct = condense_tree(slt, min_cluster_size);
  return label_points(ct, select_clusters_eom(ct, allow_single_cluster));
}

template <DistanceSource D>
ClusterResult hdbscan(const D& dist, const ClusterParams& params) {
  return hdbscan(dist, params.min_cluster_size, params.min_samples, params.allow_single_cluster);
}

}  // namespace catana::cluster
