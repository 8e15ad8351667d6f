#pragma once

// Brute-force reference implementations used only by tests. Nothing here
// calls into the library's graph algorithms; each works from a plain edge
// list or dense adjacency matrix.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <set>
#include <utility>
#include <vector>

#include "netchron/graph.hpp"
#include "netchron/random.hpp"

namespace oracle {

using netchron::NodeId;
using EdgeList = std::vector<std::pair<NodeId, NodeId>>;
using Dense = std::vector<std::vector<long long>>;

inline EdgeList edge_list(const netchron::TemporalNetwork& net) {
  EdgeList out;
  for (const auto& e : net.edges()) out.emplace_back(e.u, e.v);
  return out;
}

inline Dense adjacency(std::size_t n, const EdgeList& edges) {
  Dense a(n, std::vector<long long>(n, 0));
  for (auto [u, v] : edges) a[u][v] = a[v][u] = 1;
  return a;
}

inline Dense multiply(const Dense& x, const Dense& y) {
  const std::size_t n = x.size();
  Dense out(n, std::vector<long long>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (x[i][k])
        for (std::size_t j = 0; j < n; ++j) out[i][j] += x[i][k] * y[k][j];
  return out;
}

inline std::set<NodeId> neighbor_set(const Dense& a, NodeId i) {
  std::set<NodeId> s;
  for (NodeId j = 0; j < a.size(); ++j)
    if (a[i][j]) s.insert(j);
  return s;
}

/// Erdos-Renyi G(n, p) as an edge list (no self-loops, no duplicates).
inline EdgeList random_graph(std::size_t n, double p, netchron::Rng& rng) {
  EdgeList out;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j)
      if (netchron::uniform01(rng) < p) out.emplace_back(i, j);
  return out;
}

inline netchron::TemporalNetwork to_network(std::size_t n, const EdgeList& edges) {
  std::vector<netchron::Edge> es;
  for (auto [u, v] : edges) es.push_back({u, v, std::nullopt, std::nullopt});
  return netchron::TemporalNetwork(n, std::move(es));
}

inline bool connected(std::size_t n, const EdgeList& edges) {
  if (n == 0) return true;
  const Dense a = adjacency(n, edges);
  std::vector<bool> seen(n, false);
  std::vector<NodeId> stack = {0};
  seen[0] = true;
  while (!stack.empty()) {
    const NodeId x = stack.back();
    stack.pop_back();
    for (NodeId y = 0; y < n; ++y)
      if (a[x][y] && !seen[y]) {
        seen[y] = true;
        stack.push_back(y);
      }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

/// Coreness by repeated peeling for every k: a node is in the k-core if it
/// survives deleting nodes of degree < k until none remain.
inline std::vector<std::size_t> coreness(std::size_t n, const EdgeList& edges) {
  const Dense a = adjacency(n, edges);
  std::vector<std::size_t> core(n, 0);
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<bool> alive(n, true);
    bool changed = true;
    while (changed) {
      changed = false;
      for (NodeId i = 0; i < n; ++i) {
        if (!alive[i]) continue;
        std::size_t d = 0;
        for (NodeId j = 0; j < n; ++j) d += alive[j] && a[i][j];
        if (d < k) {
          alive[i] = false;
          changed = true;
        }
      }
    }
    for (NodeId i = 0; i < n; ++i)
      if (alive[i]) core[i] = k;
  }
  return core;
}

inline double clustering(const Dense& a, NodeId i) {
  const auto nb = neighbor_set(a, i);
  const double k = static_cast<double>(nb.size());
  if (nb.size() < 2) return 0.0;
  double links = 0;
  for (NodeId x : nb)
    for (NodeId y : nb)
      if (x < y && a[x][y]) links += 1;
  return 2.0 * links / (k * (k - 1.0));
}

/// Dense power iteration with dangling mass spread uniformly.
inline std::vector<double> pagerank(std::size_t n, const EdgeList& edges, double d = 0.85) {
  const Dense a = adjacency(n, edges);
  std::vector<double> x(n, 1.0 / static_cast<double>(n));
  for (int it = 0; it < 100000; ++it) {
    std::vector<double> y(n, 0.0);
    double dangling = 0.0;
    for (NodeId j = 0; j < n; ++j) {
      double deg = 0;
      for (NodeId i = 0; i < n; ++i) deg += static_cast<double>(a[j][i]);
      if (deg == 0) {
        dangling += x[j];
        continue;
      }
      for (NodeId i = 0; i < n; ++i)
        if (a[j][i]) y[i] += d * x[j] / deg;
    }
    double diff = 0.0;
    for (NodeId i = 0; i < n; ++i) {
      y[i] += (1.0 - d) / static_cast<double>(n) + d * dangling / static_cast<double>(n);
      diff += std::abs(y[i] - x[i]);
    }
    x = y;
    if (diff < 1e-15) break;
  }
  return x;
}

/// Edge betweenness by listing every shortest path of every unordered node
/// pair explicitly.
inline std::vector<double> betweenness(std::size_t n, const EdgeList& edges) {
  const Dense a = adjacency(n, edges);
  std::vector<std::vector<double>> share(n, std::vector<double>(n, 0.0));
  for (NodeId s = 0; s < n; ++s) {
    std::vector<int> dist(n, -1);
    std::queue<NodeId> q;
    dist[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const NodeId x = q.front();
      q.pop();
      for (NodeId y = 0; y < n; ++y)
        if (a[x][y] && dist[y] < 0) {
          dist[y] = dist[x] + 1;
          q.push(y);
        }
    }
    for (NodeId t = s + 1; t < n; ++t) {
      if (dist[t] < 0) continue;
      std::vector<std::vector<NodeId>> paths;
      std::vector<NodeId> cur = {s};
      std::function<void(NodeId)> walk = [&](NodeId x) {
        if (x == t) {
          paths.push_back(cur);
          return;
        }
        for (NodeId y = 0; y < n; ++y)
          if (a[x][y] && dist[y] == dist[x] + 1) {
            cur.push_back(y);
            walk(y);
            cur.pop_back();
          }
      };
      walk(s);
      for (const auto& p : paths)
        for (std::size_t k = 0; k + 1 < p.size(); ++k) {
          const NodeId u = std::min(p[k], p[k + 1]), v = std::max(p[k], p[k + 1]);
          share[u][v] += 1.0 / static_cast<double>(paths.size());
        }
    }
  }
  std::vector<double> out;
  for (auto [u, v] : edges) out.push_back(share[std::min(u, v)][std::max(u, v)]);
  return out;
}

/// The 18 structural columns for every edge, in edge-list order, from sets
/// and matrix powers.
inline std::vector<std::vector<double>> structural_table(std::size_t n, const EdgeList& edges,
                                                         double eps = 1e-8, double lambda = 0.01) {
  const Dense a = adjacency(n, edges);
  const Dense a2 = multiply(a, a);
  const Dense a3 = multiply(a2, a);
  const auto pr = pagerank(n, edges);
  const auto core = coreness(n, edges);
  const auto bn = betweenness(n, edges);
  std::vector<std::vector<double>> rows;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const NodeId i = std::min(edges[e].first, edges[e].second);
    const NodeId j = std::max(edges[e].first, edges[e].second);
    const auto gi = neighbor_set(a, i), gj = neighbor_set(a, j);
    std::set<NodeId> common, uni;
    std::set_intersection(gi.begin(), gi.end(), gj.begin(), gj.end(),
                          std::inserter(common, common.end()));
    std::set_union(gi.begin(), gi.end(), gj.begin(), gj.end(), std::inserter(uni, uni.end()));
    const double ki = static_cast<double>(gi.size()), kj = static_cast<double>(gj.size());
    const double cn = static_cast<double>(common.size());
    double aa = 0, ra = 0;
    for (NodeId z : common) {
      const double kz = static_cast<double>(neighbor_set(a, z).size());
      aa += 1.0 / std::log(kz + eps);
      ra += 1.0 / kz;
    }
    // Edge similarity: common neighbours over neighbours other than i and j.
    std::set<NodeId> outside = uni;
    outside.erase(i);
    outside.erase(j);
    rows.push_back({ki,
                    kj,
                    ki + kj,
                    ki * kj,
                    std::min(ki, kj),
                    std::max(ki, kj),
                    clustering(a, i),
                    clustering(a, j),
                    cn,
                    cn / (static_cast<double>(uni.size()) + eps),
                    aa,
                    ra,
                    cn / (static_cast<double>(outside.size()) + eps),
                    bn[e],
                    cn / std::max(std::min(ki - 1.0, kj - 1.0), 1.0),
                    static_cast<double>(a2[i][j]) + lambda * static_cast<double>(a3[i][j]),
                    std::max(pr[i], pr[j]),
                    static_cast<double>(std::min(core[i], core[j]))});
  }
  return rows;
}

/// Columns holding integer counts (compared exactly).
inline bool integer_column(std::size_t c) {
  return c <= 5 || c == 8 || c == 17;
}

}  // namespace oracle
