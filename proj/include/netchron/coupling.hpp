#pragma once

// Structure-state coupling: neighborhood propagation over node inputs
// [degree, clustering, coreness, state] and the edge-level representation
// built from the resulting embeddings. Forward and reverse passes.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "netchron/error.hpp"
#include "netchron/features.hpp"
#include "netchron/graph.hpp"
#include "netchron/matrix.hpp"
#include "netchron/random.hpp"

namespace netchron {

enum class Activation { Tanh, Relu };

constexpr std::string_view to_string(Activation a) {
  return a == Activation::Tanh ? "tanh" : "relu";
}

inline std::optional<Activation> parse_activation(std::string_view s) {
  if (s == "tanh") return Activation::Tanh;
  if (s == "relu") return Activation::Relu;
  return std::nullopt;
}

inline double activate(Activation a, double v) {
  return a == Activation::Tanh ? std::tanh(v) : (v > 0.0 ? v : 0.0);
}

/// Derivative expressed through the activation output y = σ(v).
inline double activate_grad_from_output(Activation a, double y) {
  return a == Activation::Tanh ? 1.0 - y * y : (y > 0.0 ? 1.0 : 0.0);
}

/// Neighborhood weights α_ij: Mean uses 1/k(i), Symmetric 1/sqrt(k(i)k(j)).
enum class Aggregation { Mean, Symmetric };

constexpr std::string_view to_string(Aggregation a) {
  return a == Aggregation::Mean ? "mean" : "symmetric";
}

inline std::optional<Aggregation> parse_aggregation(std::string_view s) {
  if (s == "mean") return Aggregation::Mean;
  if (s == "symmetric") return Aggregation::Symmetric;
  return std::nullopt;
}

inline constexpr std::size_t kNodeInputDim = 4;

struct PropagationWeights {
  std::vector<std::size_t> dims;      // d_0 = 4, d_1, ..., d_L
  std::vector<Matrix> self_weights;      // W1^(l): d_{l-1} x d_l
  std::vector<Matrix> neighbor_weights;  // W2^(l): d_{l-1} x d_l
  Activation activation = Activation::Tanh;
  Aggregation aggregation = Aggregation::Mean;

  std::size_t layers() const noexcept { return self_weights.size(); }
  std::size_t output_dim() const noexcept { return dims.empty() ? 0 : dims.back(); }
};

inline void fill_glorot(Matrix& m, Rng& rng) {
  const double scale = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
  for (double& v : m.values()) v = uniform(rng, -scale, scale);
}

/// Glorot-uniform weights for the given layer widths. dims = {4} (or empty)
/// means no propagation layers.
inline PropagationWeights init_weights(std::span<const std::size_t> dims, std::uint64_t seed,
                                       Activation activation = Activation::Tanh,
                                       Aggregation aggregation = Aggregation::Mean) {
  if (dims.empty() || dims.front() != kNodeInputDim) {
    throw Error(ErrorKind::BadDims, "propagation input width must be 4");
  }
  PropagationWeights w;
  w.dims.assign(dims.begin(), dims.end());
  w.activation = activation;
  w.aggregation = aggregation;
  Rng rng = make_rng(seed, 0xc0);
  for (std::size_t l = 1; l < dims.size(); ++l) {
    if (dims[l] == 0) throw Error(ErrorKind::BadDims, "layer width must be positive");
    Matrix self(dims[l - 1], dims[l]);
    Matrix nbr(dims[l - 1], dims[l]);
    fill_glorot(self, rng);
    fill_glorot(nbr, rng);
    w.self_weights.push_back(std::move(self));
    w.neighbor_weights.push_back(std::move(nbr));
  }
  return w;
}

/// Node inputs [k, C, core, x] standardized per column. With
/// include_state=false the state column is zero (structure-only ablation).
inline Matrix node_input_matrix(const TemporalNetwork& net, std::span<const NodeStructStats> stats,
                                std::span<const double> state, bool include_state = true) {
  if (stats.size() != net.node_count() || state.size() != net.node_count()) {
    throw Error(ErrorKind::DimensionMismatch, "node inputs inconsistent with network");
  }
  FeatureMatrix raw({"k", "C", "core", "x"}, net.node_count());
  for (NodeId i = 0; i < net.node_count(); ++i) {
    raw.values(i, 0) = static_cast<double>(stats[i].degree);
    raw.values(i, 1) = stats[i].clustering;
    raw.values(i, 2) = static_cast<double>(stats[i].coreness);
    raw.values(i, 3) = include_state ? state[i] : 0.0;
  }
  if (net.node_count() < 2) return raw.values;
  return normalize(raw).values;
}

/// out_i = Σ_{j∈Γ(i)} α_ij h_j
inline Matrix aggregate_neighbors(const TemporalNetwork& net, const Matrix& h, Aggregation agg) {
  Matrix out(h.rows(), h.cols());
  for (NodeId i = 0; i < net.node_count(); ++i) {
    const auto nbrs = net.neighbors(i);
    if (nbrs.empty()) continue;
    auto o = out.row(i);
    const double ki = static_cast<double>(nbrs.size());
    for (NodeId j : nbrs) {
      const double a = agg == Aggregation::Mean
                           ? 1.0 / ki
                           : 1.0 / std::sqrt(ki * static_cast<double>(net.degree(j)));
      auto hj = h.row(j);
      for (std::size_t c = 0; c < o.size(); ++c) o[c] += a * hj[c];
    }
  }
  return out;
}

/// Transpose of aggregate_neighbors: out_j = Σ_{i: j∈Γ(i)} α_ij g_i
inline Matrix aggregate_neighbors_transpose(const TemporalNetwork& net, const Matrix& g,
                                            Aggregation agg) {
  Matrix out(g.rows(), g.cols());
  for (NodeId i = 0; i < net.node_count(); ++i) {
    const auto nbrs = net.neighbors(i);
    if (nbrs.empty()) continue;
    const double ki = static_cast<double>(nbrs.size());
    auto gi = g.row(i);
    for (NodeId j : nbrs) {
      const double a = agg == Aggregation::Mean
                           ? 1.0 / ki
                           : 1.0 / std::sqrt(ki * static_cast<double>(net.degree(j)));
      auto o = out.row(j);
      for (std::size_t c = 0; c < o.size(); ++c) o[c] += a * gi[c];
    }
  }
  return out;
}

/// Activations retained for the reverse pass. layer_inputs[l] is H^(l),
/// aggregated[l] is S·H^(l) for l < L.
struct Propagation {
  std::vector<Matrix> layer_inputs;
  std::vector<Matrix> aggregated;

  const Matrix& embeddings() const { return layer_inputs.back(); }
};

/// h_i^(l) = σ(W1 h_i^(l-1) + W2 Σ_j α_ij h_j^(l-1)) for l = 1..L.
inline Propagation propagate(const TemporalNetwork& net, const Matrix& node_inputs,
                             const PropagationWeights& w) {
  if (node_inputs.rows() != net.node_count() || node_inputs.cols() != w.dims.front()) {
    throw Error(ErrorKind::DimensionMismatch, "node input matrix shape");
  }
  Propagation p;
  p.layer_inputs.push_back(node_inputs);
  for (std::size_t l = 0; l < w.layers(); ++l) {
    const Matrix& h = p.layer_inputs.back();
    Matrix agg = aggregate_neighbors(net, h, w.aggregation);
    Matrix pre(h.rows(), w.dims[l + 1]);
    gemm_acc(h, w.self_weights[l], pre);
    gemm_acc(agg, w.neighbor_weights[l], pre);
    for (double& v : pre.values()) v = activate(w.activation, v);
    p.aggregated.push_back(std::move(agg));
    p.layer_inputs.push_back(std::move(pre));
  }
  return p;
}

struct PropagationGradients {
  std::vector<Matrix> self_weights;
  std::vector<Matrix> neighbor_weights;
};

/// Reverse pass given dLoss/dH^(L).
inline PropagationGradients propagate_backward(const TemporalNetwork& net,
                                               const PropagationWeights& w, const Propagation& p,
                                               Matrix grad_out) {
  PropagationGradients g;
  g.self_weights.resize(w.layers());
  g.neighbor_weights.resize(w.layers());
  for (std::size_t l = w.layers(); l-- > 0;) {
    const Matrix& out = p.layer_inputs[l + 1];
    for (std::size_t k = 0; k < grad_out.size(); ++k) {
      grad_out.values()[k] *= activate_grad_from_output(w.activation, out.values()[k]);
    }
    g.self_weights[l] = Matrix(w.self_weights[l].rows(), w.self_weights[l].cols());
    g.neighbor_weights[l] = Matrix(w.neighbor_weights[l].rows(), w.neighbor_weights[l].cols());
    gemm_tn_acc(p.layer_inputs[l], grad_out, g.self_weights[l]);
    gemm_tn_acc(p.aggregated[l], grad_out, g.neighbor_weights[l]);
    if (l == 0) break;
    Matrix grad_in(out.rows(), w.dims[l]);
    gemm_nt_acc(grad_out, w.self_weights[l], grad_in);
    Matrix grad_agg(out.rows(), w.dims[l]);
    gemm_nt_acc(grad_out, w.neighbor_weights[l], grad_agg);
    Matrix back = aggregate_neighbors_transpose(net, grad_agg, w.aggregation);
    for (std::size_t k = 0; k < grad_in.size(); ++k) grad_in.values()[k] += back.values()[k];
    grad_out = std::move(grad_in);
  }
  return g;
}

inline std::vector<std::string> coupled_columns(std::size_t width) {
  std::vector<std::string> names;
  for (const char* block : {"h_i_", "h_j_", "h_sum_", "h_absdiff_"}) {
    for (std::size_t c = 0; c < width; ++c) names.push_back(block + std::to_string(c));
  }
  return names;
}

/// Writes [h_i, h_j, h_i+h_j, |h_i-h_j|] for edge (i,j) into `out`.
inline void coupled_row(const Matrix& h, NodeId i, NodeId j, std::span<double> out) {
  const std::size_t d = h.cols();
  const auto hi = h.row(i);
  const auto hj = h.row(j);
  for (std::size_t c = 0; c < d; ++c) {
    out[c] = hi[c];
    out[d + c] = hj[c];
    out[2 * d + c] = hi[c] + hj[c];
    out[3 * d + c] = std::abs(hi[c] - hj[c]);
  }
}

/// Accumulates dLoss/dh_i and dLoss/dh_j from the gradient of one coupled row.
/// The |.| block uses sign(0) = 0.
inline void coupled_row_backward(const Matrix& h, NodeId i, NodeId j,
                                 std::span<const double> grad_row, Matrix& grad_h) {
  const std::size_t d = h.cols();
  auto gi = grad_h.row(i);
  auto gj = grad_h.row(j);
  for (std::size_t c = 0; c < d; ++c) {
    const double diff = h(i, c) - h(j, c);
    const double sign = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
    gi[c] += grad_row[c] + grad_row[2 * d + c] + sign * grad_row[3 * d + c];
    gj[c] += grad_row[d + c] + grad_row[2 * d + c] - sign * grad_row[3 * d + c];
  }
}

/// Edge-level coupled representation for every edge of `net`, endpoint
/// order (u,v) with u < v.
inline FeatureMatrix coupled_edge_features(const Matrix& embeddings, const TemporalNetwork& net) {
  if (embeddings.rows() != net.node_count()) {
    throw Error(ErrorKind::DimensionMismatch, "one embedding per node required");
  }
  FeatureMatrix fm(coupled_columns(embeddings.cols()), net.edge_count());
  const auto edges = net.edges();
  for (EdgeId e = 0; e < edges.size(); ++e) {
    coupled_row(embeddings, edges[e].u, edges[e].v, fm.values.row(e));
  }
  return fm;
}

}  // namespace netchron
