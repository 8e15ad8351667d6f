#pragma once

// Edge feature tables: structural descriptors of each edge, compositions of
// the endpoint steady-state values, and column normalization.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "netchron/dynamics.hpp"
#include "netchron/error.hpp"
#include "netchron/graph.hpp"
#include "netchron/matrix.hpp"

namespace netchron {

/// Guard for ratios and logarithms.
inline constexpr double kEpsilon = 1e-8;
/// Weight of the cubic term in the local path index.
inline constexpr double kLocalPathLambda = 0.01;

struct ColumnStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;  // of the min-max scaled column
  double std = 0.0;   // population std of the min-max scaled column
  bool degenerate = false;
};

/// M x d table of edge features with named columns. Row r describes edge r
/// of the network it was computed on.
struct FeatureMatrix {
  std::vector<std::string> columns;
  Matrix values;
  std::vector<ColumnStats> stats;  // filled by normalize()

  FeatureMatrix() = default;
  FeatureMatrix(std::vector<std::string> names, std::size_t rows)
      : columns(std::move(names)), values(rows, columns.size()) {
    std::unordered_set<std::string_view> seen;
    for (const auto& c : columns) {
      if (!seen.insert(c).second) throw Error(ErrorKind::BadSpec, "duplicate column name " + c);
    }
  }

  std::size_t rows() const noexcept { return values.rows(); }
  std::size_t cols() const noexcept { return values.cols(); }

  std::vector<double> column(std::size_t c) const {
    std::vector<double> out(rows());
    for (std::size_t r = 0; r < rows(); ++r) out[r] = values(r, c);
    return out;
  }

  std::ptrdiff_t find(std::string_view name) const {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (columns[c] == name) return static_cast<std::ptrdiff_t>(c);
    }
    return -1;
  }
};

inline const std::vector<std::string>& structural_columns() {
  static const std::vector<std::string> names = {
      "k_i", "k_j", "k_sum", "k_prod", "k_min", "k_max", "C_i", "C_j", "CN",
      "Jaccard", "AA", "RA", "ES", "BN", "CC_edge", "LP", "PR", "KS"};
  return names;
}

inline const std::vector<std::string>& state_columns() {
  static const std::vector<std::string> names = {
      "x_i", "x_j", "x_sum", "x_absdiff", "x_prod", "x_ratio_ij", "x_ratio_ji"};
  return names;
}

/// The 18 structural columns. Endpoint order is (u,v) with u < v.
inline FeatureMatrix structural_edge_features(const TemporalNetwork& net,
                                              std::span<const NodeStructStats> stats,
                                              std::span<const double> pagerank_values,
                                              std::span<const double> betweenness) {
  if (stats.size() != net.node_count() || pagerank_values.size() != net.node_count() ||
      betweenness.size() != net.edge_count()) {
    throw Error(ErrorKind::DimensionMismatch, "feature inputs inconsistent with network");
  }
  FeatureMatrix fm(structural_columns(), net.edge_count());
  const auto edges = net.edges();
  for (EdgeId e = 0; e < edges.size(); ++e) {
    const NodeId i = edges[e].u;
    const NodeId j = edges[e].v;
    const double ki = static_cast<double>(stats[i].degree);
    const double kj = static_cast<double>(stats[j].degree);

    const auto ni = net.neighbors(i);
    const auto nj = net.neighbors(j);
    double cn = 0.0, aa = 0.0, ra = 0.0;
    for (NodeId z : ni) {
      if (!std::binary_search(nj.begin(), nj.end(), z)) continue;
      const double kz = static_cast<double>(net.degree(z));
      cn += 1.0;
      aa += 1.0 / std::log(kz + kEpsilon);
      ra += 1.0 / kz;
    }
    const double uni = ki + kj - cn;
    const auto walks = walk_counts(net, i, j);

    auto row = fm.values.row(e);
    row[0] = ki;
    row[1] = kj;
    row[2] = ki + kj;
    row[3] = ki * kj;
    row[4] = std::min(ki, kj);
    row[5] = std::max(ki, kj);
    row[6] = stats[i].clustering;
    row[7] = stats[j].clustering;
    row[8] = cn;
    row[9] = cn / (uni + kEpsilon);
    row[10] = aa;
    row[11] = ra;
    row[12] = cn / (ki + kj - 2.0 - cn + kEpsilon);
    row[13] = betweenness[e];
    row[14] = cn / std::max(std::min(ki - 1.0, kj - 1.0), 1.0);
    row[15] = static_cast<double>(walks.length2) +
              kLocalPathLambda * static_cast<double>(walks.length3);
    row[16] = std::max(pagerank_values[i], pagerank_values[j]);
    row[17] = static_cast<double>(std::min(stats[i].coreness, stats[j].coreness));
  }
  return fm;
}

inline FeatureMatrix steady_state_edge_features(const TemporalNetwork& net,
                                                std::span<const double> state) {
  if (state.size() != net.node_count()) {
    throw Error(ErrorKind::DimensionMismatch, "steady state length differs from node count");
  }
  FeatureMatrix fm(state_columns(), net.edge_count());
  const auto edges = net.edges();
  for (EdgeId e = 0; e < edges.size(); ++e) {
    const double xi = state[edges[e].u];
    const double xj = state[edges[e].v];
    auto row = fm.values.row(e);
    row[0] = xi;
    row[1] = xj;
    row[2] = xi + xj;
    row[3] = std::abs(xi - xj);
    row[4] = xi * xj;
    row[5] = xi / (xj + kEpsilon);
    row[6] = xj / (xi + kEpsilon);
  }
  return fm;
}

/// Per column: min-max scaling with an epsilon-guarded denominator, then
/// standardization by the population mean and std. Constant columns become
/// all zeros and are flagged degenerate.
inline FeatureMatrix normalize(const FeatureMatrix& fm) {
  if (fm.rows() < 2) throw Error(ErrorKind::EmptyInput, "normalize needs at least two rows");
  FeatureMatrix out = fm;
  out.stats.assign(fm.cols(), {});
  const double m = static_cast<double>(fm.rows());
  for (std::size_t c = 0; c < fm.cols(); ++c) {
    ColumnStats& st = out.stats[c];
    st.min = st.max = fm.values(0, c);
    for (std::size_t r = 1; r < fm.rows(); ++r) {
      st.min = std::min(st.min, fm.values(r, c));
      st.max = std::max(st.max, fm.values(r, c));
    }
    const double range = st.max - st.min + kEpsilon;
    double sum = 0.0;
    for (std::size_t r = 0; r < fm.rows(); ++r) {
      out.values(r, c) = (fm.values(r, c) - st.min) / range;
      sum += out.values(r, c);
    }
    st.mean = sum / m;
    double ss = 0.0;
    for (std::size_t r = 0; r < fm.rows(); ++r) {
      const double d = out.values(r, c) - st.mean;
      ss += d * d;
    }
    st.std = std::sqrt(ss / m);
    st.degenerate = st.max == st.min || st.std == 0.0;
    for (std::size_t r = 0; r < fm.rows(); ++r) {
      out.values(r, c) = st.degenerate ? 0.0 : (out.values(r, c) - st.mean) / st.std;
    }
  }
  return out;
}

/// Column-wise concatenation of tables with equal row counts.
inline FeatureMatrix concat_columns(std::span<const FeatureMatrix* const> parts) {
  std::vector<std::string> names;
  std::size_t rows = parts.empty() ? 0 : parts.front()->rows();
  for (const auto* p : parts) {
    if (p->rows() != rows) throw Error(ErrorKind::RowMismatch, "feature tables differ in rows");
    names.insert(names.end(), p->columns.begin(), p->columns.end());
  }
  FeatureMatrix out(std::move(names), rows);
  bool have_stats = !parts.empty();
  for (const auto* p : parts) have_stats = have_stats && p->stats.size() == p->cols();
  std::size_t offset = 0;
  for (const auto* p : parts) {
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < p->cols(); ++c) out.values(r, offset + c) = p->values(r, c);
    }
    if (have_stats) out.stats.insert(out.stats.end(), p->stats.begin(), p->stats.end());
    offset += p->cols();
  }
  return out;
}

enum class FeatureMode { Both, StructOnly, StateOnly };

constexpr std::string_view to_string(FeatureMode m) {
  switch (m) {
    case FeatureMode::Both: return "both";
    case FeatureMode::StructOnly: return "struct";
    case FeatureMode::StateOnly: return "state";
  }
  return "unknown";
}

inline std::optional<FeatureMode> parse_feature_mode(std::string_view s) {
  if (s == "both") return FeatureMode::Both;
  if (s == "struct") return FeatureMode::StructOnly;
  if (s == "state") return FeatureMode::StateOnly;
  return std::nullopt;
}

/// Keeps the columns a mode uses: StructOnly drops the steady-state columns,
/// StateOnly keeps only them.
inline FeatureMatrix feature_subset(const FeatureMatrix& fm, FeatureMode mode) {
  const auto& state = state_columns();
  auto is_state = [&](const std::string& name) {
    return std::find(state.begin(), state.end(), name) != state.end();
  };
  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < fm.cols(); ++c) {
    const bool st = is_state(fm.columns[c]);
    if (mode == FeatureMode::Both || (mode == FeatureMode::StateOnly) == st) keep.push_back(c);
  }
  std::vector<std::string> names;
  for (std::size_t c : keep) names.push_back(fm.columns[c]);
  FeatureMatrix out(std::move(names), fm.rows());
  for (std::size_t r = 0; r < fm.rows(); ++r) {
    for (std::size_t k = 0; k < keep.size(); ++k) out.values(r, k) = fm.values(r, keep[k]);
  }
  if (fm.stats.size() == fm.cols()) {
    for (std::size_t c : keep) out.stats.push_back(fm.stats[c]);
  }
  return out;
}

}  // namespace netchron
