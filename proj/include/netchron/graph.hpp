#pragma once

// Undirected temporal network (final snapshot plus per-edge formation
// times) and the topological quantities computed on it.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "netchron/error.hpp"

namespace netchron {

using NodeId = std::size_t;
using EdgeId = std::size_t;

/// Input record for build_network. `time` is a raw timestamp (e.g. a year).
struct RawEdge {
  NodeId u = 0;
  NodeId v = 0;
  std::optional<double> time;
};

/// Stored edge; endpoints are always ordered u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  std::optional<double> alpha;     // normalized formation time in [0,1]
  std::optional<double> raw_time;  // timestamp as supplied

  bool has_time() const noexcept { return alpha.has_value(); }
};

/// Smallest integer count >= fraction * total, robust to representation
/// error (0.3 * 10 must give 3, not 4).
inline std::size_t ceil_fraction(double fraction, std::size_t total) {
  const double scaled = fraction * static_cast<double>(total);
  return static_cast<std::size_t>(std::ceil(scaled - 1e-9));
}

class TemporalNetwork {
 public:
  TemporalNetwork() = default;

  /// Validates structure; alphas are taken as given. labeled_mask defaults
  /// to "has a time".
  TemporalNetwork(std::size_t node_count, std::vector<Edge> edges,
                  std::optional<std::vector<bool>> labeled_mask = std::nullopt)
      : node_count_(node_count), edges_(std::move(edges)), adjacency_(node_count) {
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(edges_.size() * 2);
    for (auto& e : edges_) {
      if (e.u == e.v) {
        throw Error(ErrorKind::SelfLoop, "self-loop on node " + std::to_string(e.u));
      }
      if (e.u > e.v) std::swap(e.u, e.v);
      if (e.v >= node_count_) {
        throw Error(ErrorKind::BadSpec, "node id " + std::to_string(e.v) + " out of range");
      }
      const std::uint64_t key = (static_cast<std::uint64_t>(e.u) << 32) | e.v;
      if (!seen.insert(key).second) {
        throw Error(ErrorKind::DuplicateEdge,
                    "(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
      }
      adjacency_[e.u].push_back(e.v);
      adjacency_[e.v].push_back(e.u);
    }
    for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
    if (labeled_mask) {
      if (labeled_mask->size() != edges_.size()) {
        throw Error(ErrorKind::RowMismatch, "labeled mask length differs from edge count");
      }
      labeled_ = std::move(*labeled_mask);
      for (std::size_t i = 0; i < edges_.size(); ++i) {
        if (labeled_[i] && !edges_[i].has_time()) {
          throw Error(ErrorKind::BadSpec, "labeled edge without a formation time");
        }
      }
    } else {
      labeled_.resize(edges_.size());
      for (std::size_t i = 0; i < edges_.size(); ++i) labeled_[i] = edges_[i].has_time();
    }
  }

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  std::span<const NodeId> neighbors(NodeId i) const { return adjacency_.at(i); }
  std::size_t degree(NodeId i) const { return adjacency_.at(i).size(); }
  const std::vector<bool>& labeled_mask() const noexcept { return labeled_; }
  bool is_labeled(EdgeId e) const { return labeled_.at(e); }

  bool has_edge(NodeId a, NodeId b) const {
    const auto& n = adjacency_.at(a);
    return std::binary_search(n.begin(), n.end(), b);
  }

  /// Same topology and times with a different training mask.
  TemporalNetwork with_labeled_mask(std::vector<bool> mask) const {
    return TemporalNetwork(node_count_, edges_, std::move(mask));
  }

  /// Edge set reconstructed from the adjacency lists, as sorted (u<v) pairs.
  std::vector<std::pair<NodeId, NodeId>> rebuild_edge_set() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    for (NodeId i = 0; i < node_count_; ++i) {
      for (NodeId j : adjacency_[i]) {
        if (i < j) out.emplace_back(i, j);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::size_t node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<bool> labeled_;
};

/// Builds a network from raw records, min-max normalizing the supplied
/// times to [0,1]. Edges without a time are unlabeled. When every time is
/// equal, all alphas are 0.
inline TemporalNetwork build_network(std::span<const RawEdge> raw,
                                     std::optional<std::size_t> node_count = std::nullopt) {
  if (raw.empty()) throw Error(ErrorKind::EmptyInput, "edge list is empty");
  NodeId max_id = 0;
  double tmin = std::numeric_limits<double>::infinity();
  double tmax = -std::numeric_limits<double>::infinity();
  for (const auto& r : raw) {
    max_id = std::max({max_id, r.u, r.v});
    if (r.time) {
      tmin = std::min(tmin, *r.time);
      tmax = std::max(tmax, *r.time);
    }
  }
  const std::size_t n = node_count.value_or(max_id + 1);
  if (n <= max_id) throw Error(ErrorKind::BadSpec, "node_count smaller than largest node id + 1");

  std::vector<Edge> edges;
  edges.reserve(raw.size());
  for (const auto& r : raw) {
    Edge e{std::min(r.u, r.v), std::max(r.u, r.v), std::nullopt, r.time};
    if (r.time) e.alpha = tmax > tmin ? (*r.time - tmin) / (tmax - tmin) : 0.0;
    edges.push_back(e);
  }
  return TemporalNetwork(n, std::move(edges));
}

struct NodeStructStats {
  std::size_t degree = 0;
  double clustering = 0.0;
  std::size_t coreness = 0;
};

/// Core numbers by bucket-sorted peeling (Batagelj-Zaversnik).
inline std::vector<std::size_t> core_numbers(const TemporalNetwork& net) {
  const std::size_t n = net.node_count();
  std::vector<std::size_t> deg(n), pos(n), vert(n);
  std::size_t max_deg = 0;
  for (NodeId i = 0; i < n; ++i) {
    deg[i] = net.degree(i);
    max_deg = std::max(max_deg, deg[i]);
  }
  std::vector<std::size_t> bin(max_deg + 1, 0);
  for (NodeId i = 0; i < n; ++i) ++bin[deg[i]];
  std::size_t start = 0;
  for (auto& b : bin) {
    const std::size_t count = b;
    b = start;
    start += count;
  }
  for (NodeId i = 0; i < n; ++i) {
    pos[i] = bin[deg[i]]++;
    vert[pos[i]] = i;
  }
  for (std::size_t d = max_deg; d > 0; --d) bin[d] = bin[d - 1];
  if (!bin.empty()) bin[0] = 0;
  for (std::size_t idx = 0; idx < n; ++idx) {
    const NodeId v = vert[idx];
    for (NodeId u : net.neighbors(v)) {
      if (deg[u] > deg[v]) {
        const std::size_t du = deg[u];
        const std::size_t pu = pos[u];
        const std::size_t pw = bin[du];
        const NodeId w = vert[pw];
        if (u != w) {
          pos[u] = pw;
          vert[pu] = w;
          pos[w] = pu;
          vert[pw] = u;
        }
        ++bin[du];
        --deg[u];
      }
    }
  }
  return deg;
}

inline std::size_t triangles_at(const TemporalNetwork& net, NodeId i) {
  std::size_t t = 0;
  const auto nbrs = net.neighbors(i);
  for (std::size_t a = 0; a < nbrs.size(); ++a) {
    for (std::size_t b = a + 1; b < nbrs.size(); ++b) {
      if (net.has_edge(nbrs[a], nbrs[b])) ++t;
    }
  }
  return t;
}

inline double local_clustering(const TemporalNetwork& net, NodeId i) {
  const std::size_t k = net.degree(i);
  if (k < 2) return 0.0;
  return 2.0 * static_cast<double>(triangles_at(net, i)) / (static_cast<double>(k) * (k - 1));
}

inline std::vector<NodeStructStats> node_struct_stats(const TemporalNetwork& net) {
  const auto core = core_numbers(net);
  std::vector<NodeStructStats> out(net.node_count());
  for (NodeId i = 0; i < net.node_count(); ++i) {
    out[i] = {net.degree(i), local_clustering(net, i), core[i]};
  }
  return out;
}

struct PageRankResult {
  std::vector<double> values;
  bool converged = false;
  std::size_t iterations = 0;
};

/// Damped random-walk stationary distribution; mass at isolated nodes is
/// redistributed uniformly. Convergence is measured in L1.
inline PageRankResult pagerank(const TemporalNetwork& net, double damping = 0.85,
                               double tol = 1e-10, std::size_t max_iter = 200) {
  const std::size_t n = net.node_count();
  PageRankResult res;
  if (n == 0) {
    res.converged = true;
    return res;
  }
  const double nd = static_cast<double>(n);
  std::vector<double> pr(n, 1.0 / nd), next(n);
  for (res.iterations = 1; res.iterations <= max_iter; ++res.iterations) {
    double dangling = 0.0;
    for (NodeId i = 0; i < n; ++i) {
      if (net.degree(i) == 0) dangling += pr[i];
    }
    const double base = (1.0 - damping) / nd + damping * dangling / nd;
    std::fill(next.begin(), next.end(), base);
    for (NodeId j = 0; j < n; ++j) {
      const std::size_t k = net.degree(j);
      if (k == 0) continue;
      const double share = damping * pr[j] / static_cast<double>(k);
      for (NodeId i : net.neighbors(j)) next[i] += share;
    }
    double delta = 0.0;
    for (NodeId i = 0; i < n; ++i) delta += std::abs(next[i] - pr[i]);
    pr.swap(next);
    if (delta < tol) {
      res.converged = true;
      break;
    }
  }
  res.iterations = std::min(res.iterations, max_iter);
  res.values = std::move(pr);
  return res;
}

/// Index of the edge {a,b} for every adjacency slot, aligned with neighbors(a).
inline std::vector<std::vector<EdgeId>> adjacency_edge_ids(const TemporalNetwork& net) {
  std::vector<std::vector<EdgeId>> ids(net.node_count());
  for (NodeId i = 0; i < net.node_count(); ++i) ids[i].resize(net.degree(i));
  const auto edges = net.edges();
  for (EdgeId e = 0; e < edges.size(); ++e) {
    const auto& ed = edges[e];
    auto place = [&](NodeId a, NodeId b) {
      const auto nb = net.neighbors(a);
      ids[a][static_cast<std::size_t>(std::lower_bound(nb.begin(), nb.end(), b) - nb.begin())] = e;
    };
    place(ed.u, ed.v);
    place(ed.v, ed.u);
  }
  return ids;
}

/// Edge betweenness summed over unordered node pairs (Brandes accumulation).
/// Unreachable pairs contribute nothing.
inline std::vector<double> edge_betweenness(const TemporalNetwork& net) {
  const std::size_t n = net.node_count();
  const auto slot_ids = adjacency_edge_ids(net);
  std::vector<double> bn(net.edge_count(), 0.0);
  std::vector<double> sigma(n), delta(n);
  std::vector<std::int64_t> dist(n);
  std::vector<NodeId> order;
  order.reserve(n);
  std::queue<NodeId> q;
  for (NodeId s = 0; s < n; ++s) {
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    order.clear();
    sigma[s] = 1.0;
    dist[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const NodeId v = q.front();
      q.pop();
      order.push_back(v);
      for (NodeId w : net.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          q.push(w);
        }
        if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const NodeId w = *it;
      const auto nbrs = net.neighbors(w);
      for (std::size_t k = 0; k < nbrs.size(); ++k) {
        const NodeId v = nbrs[k];
        if (dist[v] == dist[w] - 1) {
          const double c = sigma[v] / sigma[w] * (1.0 + delta[w]);
          bn[slot_ids[w][k]] += c;
          delta[v] += c;
        }
      }
    }
  }
  for (double& b : bn) b *= 0.5;
  return bn;
}

struct WalkCounts {
  std::uint64_t length2 = 0;
  std::uint64_t length3 = 0;
  bool operator==(const WalkCounts&) const = default;
};

/// (A^2)_ij and (A^3)_ij: walk counts between i and j.
inline WalkCounts walk_counts(const TemporalNetwork& net, NodeId i, NodeId j) {
  WalkCounts wc;
  const auto ni = net.neighbors(i);
  const auto nj = net.neighbors(j);
  for (NodeId a : ni) {
    if (std::binary_search(nj.begin(), nj.end(), a)) ++wc.length2;
  }
  for (NodeId a : ni) {
    const auto na = net.neighbors(a);
    // |Γ(a) ∩ Γ(j)| via merge of sorted lists
    auto p = na.begin();
    auto r = nj.begin();
    while (p != na.end() && r != nj.end()) {
      if (*p < *r) {
        ++p;
      } else if (*r < *p) {
        ++r;
      } else {
        ++wc.length3;
        ++p;
        ++r;
      }
    }
  }
  return wc;
}

/// Checks that `sequence` lists every edge index exactly once.
inline void validate_sequence(std::span<const EdgeId> sequence, std::size_t edge_count) {
  if (sequence.size() != edge_count) {
    throw Error(ErrorKind::InvalidPermutation, "ordering length differs from edge count");
  }
  std::vector<bool> seen(edge_count, false);
  for (EdgeId e : sequence) {
    if (e >= edge_count || seen[e]) {
      throw Error(ErrorKind::InvalidPermutation, "ordering is not a permutation of edge indices");
    }
    seen[e] = true;
  }
}

/// Graph on the same node set holding the first ceil(fraction*M) edges of
/// `sequence` (edge indices in formation order).
inline TemporalNetwork prefix_graph(const TemporalNetwork& net, std::span<const EdgeId> sequence,
                                    double fraction) {
  validate_sequence(sequence, net.edge_count());
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(ErrorKind::OutOfDomain, "prefix fraction must lie in (0,1]");
  }
  const std::size_t count = std::min(ceil_fraction(fraction, net.edge_count()), net.edge_count());
  std::vector<Edge> edges;
  std::vector<bool> mask;
  edges.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    edges.push_back(net.edge(sequence[k]));
    mask.push_back(net.is_labeled(sequence[k]));
  }
  return TemporalNetwork(net.node_count(), std::move(edges), std::move(mask));
}

/// Edge indices sorted by ascending alpha (ties and unknown times last,
/// then by index). This is the ground-truth formation sequence.
inline std::vector<EdgeId> ground_truth_sequence(const TemporalNetwork& net) {
  std::vector<EdgeId> seq(net.edge_count());
  for (EdgeId e = 0; e < seq.size(); ++e) seq[e] = e;
  const auto edges = net.edges();
  std::stable_sort(seq.begin(), seq.end(), [&](EdgeId a, EdgeId b) {
    const double aa = edges[a].alpha.value_or(std::numeric_limits<double>::infinity());
    const double ab = edges[b].alpha.value_or(std::numeric_limits<double>::infinity());
    return aa < ab;
  });
  return seq;
}

}  // namespace netchron
