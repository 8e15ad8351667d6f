#pragma once

// Discrete-time node dynamics run to steady state on a fixed snapshot, and
// the exact piecewise relaxation used to show that the final state depends
// on the order in which edges appeared.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "netchron/error.hpp"
#include "netchron/graph.hpp"
#include "netchron/random.hpp"

namespace netchron {

enum class DynamicsKind { SIS, Gene, Opinion };

constexpr std::string_view to_string(DynamicsKind k) {
  switch (k) {
    case DynamicsKind::SIS: return "sis";
    case DynamicsKind::Gene: return "gene";
    case DynamicsKind::Opinion: return "opinion";
  }
  return "unknown";
}

inline std::optional<DynamicsKind> parse_dynamics_kind(std::string_view s) {
  if (s == "sis") return DynamicsKind::SIS;
  if (s == "gene") return DynamicsKind::Gene;
  if (s == "opinion") return DynamicsKind::Opinion;
  return std::nullopt;
}

struct DynamicsSpec {
  DynamicsKind kind = DynamicsKind::SIS;
  double beta = 0.4;
  double delta = 0.3;
  double hill_n = 2.0;
  std::vector<double> b1;     // Gene basal level, per node
  std::vector<double> b2;     // Gene regulation strength, per node
  std::vector<double> theta;  // Opinion susceptibility, per node
  std::uint64_t seed = 0;
  double tol = 1e-6;
  std::size_t max_steps = 1000;
  double blowup_guard = 1e12;

  void validate(std::size_t node_count) const {
    if (!(tol > 0.0)) throw Error(ErrorKind::BadSpec, "tol must be positive");
    if (max_steps < 1) throw Error(ErrorKind::BadSpec, "max_steps must be >= 1");
    switch (kind) {
      case DynamicsKind::SIS:
        if (beta < 0.0 || beta > 1.0 || delta < 0.0 || delta > 1.0) {
          throw Error(ErrorKind::BadSpec, "SIS rates must lie in [0,1]");
        }
        break;
      case DynamicsKind::Gene:
        if (!(hill_n > 1.0)) throw Error(ErrorKind::BadSpec, "Hill coefficient must exceed 1");
        if (b1.size() != node_count || b2.size() != node_count) {
          throw Error(ErrorKind::BadSpec, "Gene parameters need one (b1,b2) per node");
        }
        break;
      case DynamicsKind::Opinion:
        if (theta.size() != node_count) {
          throw Error(ErrorKind::BadSpec, "Opinion needs one theta per node");
        }
        break;
    }
  }
};

struct SteadyState {
  std::vector<double> values;
  bool converged = false;
  std::size_t steps = 0;
  double residual = 0.0;
};

/// Per-node parameters drawn from the published ranges; theta is uniform
/// over [1,1.5] ∪ [3.5,4] (equal mass per unit length).
inline DynamicsSpec sample_dynamics_params(DynamicsKind kind, std::size_t node_count,
                                           std::uint64_t seed) {
  if (node_count < 1) throw Error(ErrorKind::BadSpec, "node_count must be >= 1");
  DynamicsSpec spec;
  spec.kind = kind;
  spec.seed = seed;
  Rng rng = make_rng(seed, 0xd1);
  switch (kind) {
    case DynamicsKind::SIS:
      break;
    case DynamicsKind::Gene:
      spec.b1.resize(node_count);
      spec.b2.resize(node_count);
      for (std::size_t i = 0; i < node_count; ++i) {
        spec.b1[i] = uniform(rng, 0.0, 1.0);
        spec.b2[i] = uniform(rng, 0.5, 1.5);
      }
      break;
    case DynamicsKind::Opinion:
      spec.theta.resize(node_count);
      for (auto& t : spec.theta) {
        const double u = uniform01(rng);
        t = u < 0.5 ? 1.0 + u : 3.5 + (u - 0.5);
      }
      break;
  }
  return spec;
}

/// One synchronous application of the kind's update map.
inline std::vector<double> apply_update(const TemporalNetwork& net, const DynamicsSpec& spec,
                                        std::span<const double> x) {
  const std::size_t n = net.node_count();
  std::vector<double> out(n);
  switch (spec.kind) {
    case DynamicsKind::SIS:
      for (NodeId i = 0; i < n; ++i) {
        double stay_healthy = 1.0;
        for (NodeId j : net.neighbors(i)) stay_healthy *= 1.0 - spec.beta * x[j];
        out[i] = (1.0 - spec.delta) * x[i] + (1.0 - x[i]) * (1.0 - stay_healthy);
      }
      break;
    case DynamicsKind::Gene:
      for (NodeId i = 0; i < n; ++i) {
        double input = 0.0;
        for (NodeId j : net.neighbors(i)) input += x[j];
        const double hill = input > 0.0 ? std::pow(input, spec.hill_n) : 0.0;
        out[i] = spec.b1[i] + spec.b2[i] * hill / (1.0 + hill);
      }
      break;
    case DynamicsKind::Opinion:
      for (NodeId i = 0; i < n; ++i) {
        const auto nbrs = net.neighbors(i);
        if (nbrs.empty()) {
          out[i] = x[i];
          continue;
        }
        double mean = 0.0;
        for (NodeId j : nbrs) mean += x[j];
        mean /= static_cast<double>(nbrs.size());
        out[i] = x[i] + spec.theta[i] * (mean - x[i]);
      }
      break;
  }
  return out;
}

inline double l2_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

/// Iterates the update until ||x(t+1) - x(t)||_2 < tol or max_steps updates.
/// The default initial state is i.i.d. Uniform(0,1) drawn from spec.seed.
inline SteadyState simulate(const TemporalNetwork& net, const DynamicsSpec& spec,
                            std::optional<std::vector<double>> initial = std::nullopt) {
  const std::size_t n = net.node_count();
  spec.validate(n);
  std::vector<double> x;
  if (initial) {
    if (initial->size() != n) throw Error(ErrorKind::DimensionMismatch, "initial state length");
    x = std::move(*initial);
  } else {
    Rng rng = make_rng(spec.seed, 0x1e);
    x.resize(n);
    for (auto& v : x) v = uniform01(rng);
  }
  SteadyState st;
  for (st.steps = 1; st.steps <= spec.max_steps; ++st.steps) {
    auto next = apply_update(net, spec, x);
    st.residual = l2_distance(next, x);
    x = std::move(next);
    for (double v : x) {
      if (!std::isfinite(v) || std::abs(v) > spec.blowup_guard) {
        throw Error(ErrorKind::NumericalBlowup,
                    std::string(to_string(spec.kind)) + " state exceeded the overflow guard at step " +
                        std::to_string(st.steps));
      }
    }
    if (st.residual < spec.tol) {
      st.converged = true;
      break;
    }
  }
  st.steps = std::min(st.steps, spec.max_steps);
  st.values = std::move(x);
  return st;
}

/// One stage of a structural evolution path: the graph held fixed for
/// `duration` time units.
struct PathStage {
  TemporalNetwork graph;
  double duration = 1.0;
};

/// Exact solution of dx/dt = -(x - x*(G)) with piecewise-constant G:
/// x(t+Δ) = x* + e^{-Δ}(x(t) - x*). Returns the state after every stage.
inline std::vector<std::vector<double>> relax_trajectory(std::span<const PathStage> path,
                                                         std::span<const SteadyState> targets,
                                                         std::vector<double> initial) {
  if (path.size() != targets.size()) {
    throw Error(ErrorKind::StageMismatch, "targets and stages differ in length");
  }
  std::vector<std::vector<double>> states;
  states.reserve(path.size());
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (!(path[k].duration > 0.0)) throw Error(ErrorKind::BadSpec, "stage duration must be positive");
    const auto& target = targets[k].values;
    if (target.size() != initial.size()) {
      throw Error(ErrorKind::DimensionMismatch, "target state length differs from initial state");
    }
    const double decay = std::exp(-path[k].duration);
    for (std::size_t i = 0; i < initial.size(); ++i) {
      initial[i] = target[i] + decay * (initial[i] - target[i]);
    }
    states.push_back(initial);
  }
  return states;
}

inline std::vector<double> relax_along_path(std::span<const PathStage> path,
                                            std::span<const SteadyState> targets,
                                            std::vector<double> initial) {
  if (path.empty() && targets.empty()) return initial;
  auto states = relax_trajectory(path, targets, std::move(initial));
  return std::move(states.back());
}

struct PathDependenceReport {
  std::size_t nodes = 0;
  std::pair<NodeId, NodeId> first_edge, second_edge;
  std::vector<std::pair<NodeId, NodeId>> order_a, order_b;
  std::vector<std::vector<double>> trajectory_a, trajectory_b;  // initial state, then one per stage
  double final_distance = 0.0;
};

/// Path 0-1-...-(n-1) plus two chords (0,2) and (1,3) added in opposite
/// orders. Both paths start from the steady state of the bare path and end
/// on the same graph; targets come from `simulate` on every stage graph.
/// With `identical` set, path B repeats the order of path A.
inline PathDependenceReport path_dependence_demo(std::size_t n, const DynamicsSpec& spec,
                                                 bool identical = false, double duration = 1.0) {
  if (n < 4) throw Error(ErrorKind::BadSpec, "path dependence demo needs n >= 4");
  std::vector<Edge> base;
  for (NodeId i = 0; i + 1 < n; ++i) base.push_back({i, i + 1, std::nullopt, std::nullopt});
  const std::pair<NodeId, NodeId> e1{0, 2}, e2{1, 3};

  auto graph_with = [&](std::span<const std::pair<NodeId, NodeId>> extra) {
    auto edges = base;
    for (const auto& [u, v] : extra) edges.push_back({u, v, std::nullopt, std::nullopt});
    return TemporalNetwork(n, std::move(edges));
  };
  const TemporalNetwork g0 = graph_with({});
  const std::vector<double> initial = simulate(g0, spec).values;

  auto run = [&](std::vector<std::pair<NodeId, NodeId>> order) {
    std::vector<PathStage> path;
    std::vector<SteadyState> targets;
    for (std::size_t k = 1; k <= order.size(); ++k) {
      path.push_back({graph_with(std::span(order.data(), k)), duration});
      targets.push_back(simulate(path.back().graph, spec));
    }
    auto states = relax_trajectory(path, targets, initial);
    states.insert(states.begin(), initial);
    return states;
  };

  PathDependenceReport r;
  r.nodes = n;
  r.first_edge = e1;
  r.second_edge = e2;
  r.order_a = {e1, e2};
  r.order_b = identical ? r.order_a : std::vector<std::pair<NodeId, NodeId>>{e2, e1};
  r.trajectory_a = run(r.order_a);
  r.trajectory_b = run(r.order_b);
  r.final_distance = l2_distance(r.trajectory_a.back(), r.trajectory_b.back());
  return r;
}

}  // namespace netchron
