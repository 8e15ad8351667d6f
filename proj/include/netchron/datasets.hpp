#pragma once

// Temporal edge-list I/O, synthetic growth models with known formation
// order, and the labeled/unlabeled split.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "netchron/error.hpp"
#include "netchron/graph.hpp"
#include "netchron/random.hpp"

namespace netchron {

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// Parses the tab-separated edge-list format: `u<TAB>v<TAB>t`, where t may
/// be `?` (unknown). Lines starting with `#` and blank lines are skipped.
/// A repeated pair keeps its earliest time.
inline TemporalNetwork parse_edge_list(std::istream& in) {
  std::vector<RawEdge> raw;
  std::map<std::pair<NodeId, NodeId>, std::size_t> index;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    while (true) {
      const auto tab = rest.find('\t');
      fields.push_back(rest.substr(0, tab));
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    if (fields.size() != 3) fail("expected 3 tab-separated fields");
    auto parse_id = [&](std::string_view s) {
      NodeId id = 0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), id);
      if (ec != std::errc() || p != s.data() + s.size()) fail("bad node id '" + std::string(s) + "'");
      return id;
    };
    RawEdge e{parse_id(fields[0]), parse_id(fields[1]), std::nullopt};
    if (e.u == e.v) fail("self-loop");
    if (fields[2] != "?") {
      double t = 0.0;
      auto [p, ec] = std::from_chars(fields[2].data(), fields[2].data() + fields[2].size(), t);
      if (ec != std::errc() || p != fields[2].data() + fields[2].size() || !std::isfinite(t)) {
        fail("bad time '" + std::string(fields[2]) + "'");
      }
      e.time = t;
    }
    const auto key = std::minmax(e.u, e.v);
    auto [it, inserted] = index.try_emplace({key.first, key.second}, raw.size());
    if (inserted) {
      raw.push_back(e);
    } else {
      auto& prev = raw[it->second];
      if (e.time && (!prev.time || *e.time < *prev.time)) prev.time = e.time;
    }
  }
  if (raw.empty()) throw Error(ErrorKind::EmptyInput, "no edges in edge list");
  return build_network(raw);
}

inline TemporalNetwork load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  return parse_edge_list(in);
}

/// Canonical form: one `u<TAB>v<TAB>t` line per edge in storage order, u < v.
inline std::string format_edge_list(const TemporalNetwork& net) {
  std::string out;
  for (const auto& e : net.edges()) {
    out += std::to_string(e.u);
    out += '\t';
    out += std::to_string(e.v);
    out += '\t';
    out += e.raw_time ? format_double(*e.raw_time) : std::string("?");
    out += '\n';
  }
  return out;
}

inline void write_edge_list(const TemporalNetwork& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
  out << format_edge_list(net);
}

/// Dataset summary: nodes, edges, distinguishable pairs E_d (pairs of timed
/// edges with different times), P_Ed = E_d / C(E,2), distinct times S.
struct DatasetStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::uint64_t distinguishable_pairs = 0;
  std::uint64_t tied_pairs = 0;
  double distinguishable_fraction = 0.0;
  std::size_t distinct_times = 0;
};

inline DatasetStats dataset_stats(const TemporalNetwork& net) {
  DatasetStats s;
  s.nodes = net.node_count();
  s.edges = net.edge_count();
  std::map<double, std::uint64_t> counts;
  std::uint64_t timed = 0;
  for (const auto& e : net.edges()) {
    if (!e.alpha) continue;
    ++counts[*e.alpha];
    ++timed;
  }
  s.distinct_times = counts.size();
  std::uint64_t tied = 0;
  for (const auto& [t, c] : counts) tied += c * (c - 1) / 2;
  s.tied_pairs = tied;
  s.distinguishable_pairs = timed * (timed - (timed > 0 ? 1 : 0)) / 2 - tied;
  const double all = static_cast<double>(s.edges) * static_cast<double>(s.edges - (s.edges > 0)) / 2.0;
  s.distinguishable_fraction = all > 0.0 ? static_cast<double>(s.distinguishable_pairs) / all : 0.0;
  return s;
}

enum class SynthKind { PreferentialAttachment, RandomGrowth, ErdosRenyiShuffled };

constexpr std::string_view to_string(SynthKind k) {
  switch (k) {
    case SynthKind::PreferentialAttachment: return "pa";
    case SynthKind::RandomGrowth: return "random-growth";
    case SynthKind::ErdosRenyiShuffled: return "er-shuffled";
  }
  return "unknown";
}

inline std::optional<SynthKind> parse_synth_kind(std::string_view s) {
  if (s == "pa") return SynthKind::PreferentialAttachment;
  if (s == "random-growth") return SynthKind::RandomGrowth;
  if (s == "er-shuffled") return SynthKind::ErdosRenyiShuffled;
  return std::nullopt;
}

struct SynthSpec {
  SynthKind kind = SynthKind::PreferentialAttachment;
  std::size_t nodes = 200;
  std::size_t edges_per_node = 2;
  std::uint64_t seed = 0;
};

/// Growth models start from the single edge (0,1) at step 0; node k >= 2
/// arrives at step k-1 and attaches min(m, k) distinct edges. For
/// PreferentialAttachment targets are drawn proportionally to degree, for
/// RandomGrowth uniformly. ErdosRenyiShuffled draws the same number of
/// edges uniformly and gives each its own step in random order. Raw times
/// are the integer steps.
inline TemporalNetwork generate_synthetic(const SynthSpec& spec) {
  if (spec.edges_per_node < 1 || spec.nodes < spec.edges_per_node + 1 || spec.nodes < 2) {
    throw Error(ErrorKind::BadSpec, "synthetic spec needs N >= m+1 >= 2");
  }
  Rng rng = make_rng(spec.seed, 0x5e);
  const std::size_t n = spec.nodes;
  const std::size_t m = spec.edges_per_node;
  std::vector<RawEdge> raw;
  raw.push_back({0, 1, 0.0});

  if (spec.kind == SynthKind::ErdosRenyiShuffled) {
    std::size_t target = 1;
    for (std::size_t k = 2; k < n; ++k) target += std::min(m, k);
    const std::size_t max_edges = n * (n - 1) / 2;
    target = std::min(target, max_edges);
    std::set<std::pair<NodeId, NodeId>> used;
    raw.clear();
    while (raw.size() < target) {
      NodeId a = uniform_index(rng, n);
      NodeId b = uniform_index(rng, n);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      if (used.insert({a, b}).second) raw.push_back({a, b, std::nullopt});
    }
    std::vector<std::size_t> steps(raw.size());
    for (std::size_t i = 0; i < steps.size(); ++i) steps[i] = i;
    shuffle(steps, rng);
    for (std::size_t i = 0; i < raw.size(); ++i) raw[i].time = static_cast<double>(steps[i]);
    return build_network(raw, n);
  }

  // Each endpoint appearance is one ticket, so uniform draws from `tickets`
  // are degree-proportional.
  std::vector<NodeId> tickets = {0, 1};
  for (NodeId k = 2; k < n; ++k) {
    const std::size_t want = std::min(m, static_cast<std::size_t>(k));
    std::vector<NodeId> chosen;
    while (chosen.size() < want) {
      const NodeId t = spec.kind == SynthKind::PreferentialAttachment
                           ? tickets[uniform_index(rng, tickets.size())]
                           : uniform_index(rng, k);
      if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) chosen.push_back(t);
    }
    for (NodeId t : chosen) {
      raw.push_back({t, k, static_cast<double>(k - 1)});
      tickets.push_back(t);
      tickets.push_back(k);
    }
  }
  return build_network(raw, n);
}

/// Marks a uniform random subset of ceil(fraction * M) timed edges as
/// labeled; the rest keep their alphas for evaluation only.
inline TemporalNetwork split_labels(const TemporalNetwork& net, double fraction,
                                    std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw Error(ErrorKind::OutOfDomain, "label fraction must lie in (0,1)");
  }
  std::vector<EdgeId> timed;
  for (EdgeId e = 0; e < net.edge_count(); ++e) {
    if (net.edge(e).has_time()) timed.push_back(e);
  }
  Rng rng = make_rng(seed, 0x1a);
  shuffle(timed, rng);
  const std::size_t take = std::min(ceil_fraction(fraction, net.edge_count()), timed.size());
  std::vector<bool> mask(net.edge_count(), false);
  for (std::size_t k = 0; k < take; ++k) mask[timed[k]] = true;
  return net.with_labeled_mask(std::move(mask));
}

}  // namespace netchron
