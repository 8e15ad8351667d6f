#pragma once

// Ordering quality metrics: pairwise accuracy, rank correlation, binned rank
// trend, trajectory fidelity of macroscopic properties along the recovered
// growth sequence, hub radar, and per-feature time correlation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "netchron/error.hpp"
#include "netchron/features.hpp"
#include "netchron/graph.hpp"
#include "netchron/ordering.hpp"
#include "netchron/ranker.hpp"

namespace netchron {

/// Every pair of selected edges with different alphas, oriented (a<b by
/// index) with y = 1 when a formed first. `selected` empty means all edges.
inline std::vector<PairSample> distinguishable_pairs(const TemporalNetwork& net,
                                                     const std::vector<bool>& selected = {}) {
  std::vector<EdgeId> use;
  for (EdgeId e = 0; e < net.edge_count(); ++e) {
    if (net.edge(e).has_time() && (selected.empty() || selected[e])) use.push_back(e);
  }
  std::vector<PairSample> out;
  for (std::size_t x = 0; x < use.size(); ++x) {
    for (std::size_t y = x + 1; y < use.size(); ++y) {
      const double aa = *net.edge(use[x]).alpha;
      const double ab = *net.edge(use[y]).alpha;
      if (aa != ab) out.push_back({use[x], use[y], aa < ab ? 1 : 0});
    }
  }
  return out;
}

/// Ordering version: a is predicted first when rank(a) < rank(b).
inline double pairwise_accuracy(const GlobalOrdering& ordering, std::span<const PairSample> pairs) {
  if (pairs.empty()) throw Error(ErrorKind::EmptyPairs, "no pairs to evaluate");
  std::size_t correct = 0;
  for (const auto& p : pairs) {
    if ((ordering.rank[p.a] < ordering.rank[p.b]) == (p.y == 1)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(pairs.size());
}

/// 1-based ranks, tied values share their average rank.
inline std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> idx(values.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t start = 0; start < idx.size();) {
    std::size_t end = start + 1;
    while (end < idx.size() && values[idx[end]] == values[idx[start]]) ++end;
    const double avg = (static_cast<double>(start + 1) + static_cast<double>(end)) / 2.0;
    for (std::size_t k = start; k < end; ++k) ranks[idx[k]] = avg;
    start = end;
  }
  return ranks;
}

/// Pearson correlation; nullopt when either input is constant.
inline std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

inline std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::DimensionMismatch, "spearman inputs differ in length");
  if (x.size() < 2) return std::nullopt;
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

/// Rank correlation between predicted positions (1 = earliest) and true
/// alphas, over edges with a known time.
inline double spearman_rho(std::span<const std::size_t> predicted_rank,
                           std::span<const std::optional<double>> alphas) {
  std::vector<double> pred, truth;
  for (std::size_t e = 0; e < predicted_rank.size(); ++e) {
    if (!alphas[e]) continue;
    pred.push_back(static_cast<double>(predicted_rank[e]));
    truth.push_back(*alphas[e]);
  }
  if (pred.size() < 2) throw Error(ErrorKind::DegenerateTruth, "need at least two timed edges");
  const auto rho = spearman(pred, truth);
  if (!rho) throw Error(ErrorKind::DegenerateTruth, "all ground-truth times are equal");
  return *rho;
}

inline double spearman_rho(const GlobalOrdering& ordering, const TemporalNetwork& net) {
  std::vector<std::optional<double>> alphas;
  for (const auto& e : net.edges()) alphas.push_back(e.alpha);
  return spearman_rho(ordering.rank, alphas);
}

struct BinRecord {
  std::size_t bin = 0;
  double center = 0.0;  // median true normalized rank in the bin
  double median = 0.0;  // median predicted normalized rank
  double std = 0.0;     // population std of predicted normalized ranks
  std::size_t count = 0;
};

struct BinTrend {
  std::vector<BinRecord> bins;
  double rmse = 0.0;  // bin medians vs the diagonal at the bin centers
};

inline double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Edges are split into `bins` equal percentile bins by true rank. Ranks are
/// normalized as (r - 0.5) / M.
inline BinTrend binned_trend(std::span<const std::size_t> predicted_rank,
                             std::span<const std::size_t> true_rank, std::size_t bins = 10) {
  const std::size_t m = predicted_rank.size();
  if (true_rank.size() != m) throw Error(ErrorKind::DimensionMismatch, "rank vectors differ in length");
  if (bins == 0 || m < bins) throw Error(ErrorKind::OutOfDomain, "need M >= bins");
  const double md = static_cast<double>(m);
  std::vector<EdgeId> by_truth(m);
  for (EdgeId e = 0; e < m; ++e) by_truth[true_rank[e] - 1] = e;
  BinTrend out;
  double ss = 0.0;
  for (std::size_t b = 0; b < bins; ++b) {
    const std::size_t lo = b * m / bins;
    const std::size_t hi = (b + 1) * m / bins;
    std::vector<double> pred, truth;
    for (std::size_t pos = lo; pos < hi; ++pos) {
      const EdgeId e = by_truth[pos];
      pred.push_back((static_cast<double>(predicted_rank[e]) - 0.5) / md);
      truth.push_back((static_cast<double>(true_rank[e]) - 0.5) / md);
    }
    BinRecord rec;
    rec.bin = b;
    rec.count = pred.size();
    rec.center = median_of(truth);
    rec.median = median_of(pred);
    double mean = 0.0;
    for (double v : pred) mean += v;
    mean /= static_cast<double>(pred.size());
    double var = 0.0;
    for (double v : pred) var += (v - mean) * (v - mean);
    rec.std = std::sqrt(var / static_cast<double>(pred.size()));
    ss += (rec.median - rec.center) * (rec.median - rec.center);
    out.bins.push_back(rec);
  }
  out.rmse = std::sqrt(ss / static_cast<double>(bins));
  return out;
}

/// Gini coefficient via mean absolute difference; 0 for an all-zero sequence.
inline double gini(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  double total = 0.0, weighted = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += v[i];
    weighted += (2.0 * static_cast<double>(i + 1) - static_cast<double>(n) - 1.0) * v[i];
  }
  if (total == 0.0) return 0.0;
  return weighted / (static_cast<double>(n) * total);
}

inline double degree_gini(const TemporalNetwork& net) {
  std::vector<double> deg(net.node_count());
  for (NodeId i = 0; i < net.node_count(); ++i) deg[i] = static_cast<double>(net.degree(i));
  return gini(deg);
}

/// Mean local clustering over all nodes.
inline double average_clustering(const TemporalNetwork& net) {
  if (net.node_count() == 0) return 0.0;
  double s = 0.0;
  for (NodeId i = 0; i < net.node_count(); ++i) s += local_clustering(net, i);
  return s / static_cast<double>(net.node_count());
}

enum class TrajectoryProperty { Clustering, DegreeGini };

constexpr std::string_view to_string(TrajectoryProperty p) {
  return p == TrajectoryProperty::Clustering ? "clustering" : "degree_gini";
}

/// Property evaluated on prefix graphs at fractions s/samples, s = 1..samples.
inline std::vector<double> property_curve(const TemporalNetwork& net, std::span<const EdgeId> sequence,
                                          TrajectoryProperty property, std::size_t samples = 50) {
  std::vector<double> curve;
  curve.reserve(samples);
  for (std::size_t s = 1; s <= samples; ++s) {
    const auto g = prefix_graph(net, sequence, static_cast<double>(s) / static_cast<double>(samples));
    curve.push_back(property == TrajectoryProperty::Clustering ? average_clustering(g) : degree_gini(g));
  }
  return curve;
}

/// RMSE(pred, truth) / (max - min of truth); nullopt for a flat truth curve.
inline std::optional<double> nrmse(std::span<const double> pred, std::span<const double> truth) {
  if (pred.size() != truth.size() || truth.empty()) {
    throw Error(ErrorKind::DimensionMismatch, "curves differ in length");
  }
  double ss = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) ss += (pred[i] - truth[i]) * (pred[i] - truth[i]);
  const auto [lo, hi] = std::minmax_element(truth.begin(), truth.end());
  const double range = *hi - *lo;
  if (range == 0.0) return std::nullopt;
  return std::sqrt(ss / static_cast<double>(truth.size())) / range;
}

inline std::optional<double> trajectory_nrmse(const TemporalNetwork& net,
                                              std::span<const EdgeId> predicted,
                                              std::span<const EdgeId> truth,
                                              TrajectoryProperty property, std::size_t samples = 50) {
  const auto p = property_curve(net, predicted, property, samples);
  const auto t = property_curve(net, truth, property, samples);
  return nrmse(p, t);
}

/// Degree of `node` after each prefix fraction s/samples.
inline std::vector<double> degree_curve(const TemporalNetwork& net, std::span<const EdgeId> sequence,
                                        NodeId node, std::size_t samples = 50) {
  validate_sequence(sequence, net.edge_count());
  std::vector<double> curve;
  std::size_t taken = 0, degree = 0;
  for (std::size_t s = 1; s <= samples; ++s) {
    const std::size_t count = std::min(
        ceil_fraction(static_cast<double>(s) / static_cast<double>(samples), net.edge_count()),
        net.edge_count());
    for (; taken < count; ++taken) {
      const auto& e = net.edge(sequence[taken]);
      if (e.u == node || e.v == node) ++degree;
    }
    curve.push_back(static_cast<double>(degree));
  }
  return curve;
}

struct HubRadar {
  std::vector<NodeId> hubs;
  std::vector<double> nrmse;
  std::vector<double> s;  // 1 / (1 + NRMSE)
  double area = 0.0;
  std::vector<std::vector<double>> predicted_curves;
  std::vector<std::vector<double>> truth_curves;
};

/// Area of the regular radar polygon with radii s_k.
inline double radar_area(std::span<const double> s) {
  const std::size_t k = s.size();
  if (k < 3) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += s[i] * s[(i + 1) % k];
  return 0.5 * std::sin(2.0 * std::numbers::pi / static_cast<double>(k)) * sum;
}

/// Hubs are the top_k nodes by final degree (ties by node id). Each hub's
/// predicted degree-growth curve is compared with the true one.
inline HubRadar hub_radar(const TemporalNetwork& net, std::span<const EdgeId> predicted,
                          std::span<const EdgeId> truth, std::size_t top_k = 5,
                          std::size_t samples = 50) {
  if (top_k > net.node_count()) throw Error(ErrorKind::OutOfDomain, "top_k exceeds node count");
  std::vector<NodeId> nodes(net.node_count());
  for (NodeId i = 0; i < nodes.size(); ++i) nodes[i] = i;
  std::stable_sort(nodes.begin(), nodes.end(),
                   [&](NodeId a, NodeId b) { return net.degree(a) > net.degree(b); });
  HubRadar r;
  r.hubs.assign(nodes.begin(), nodes.begin() + static_cast<std::ptrdiff_t>(top_k));
  for (NodeId h : r.hubs) {
    auto pc = degree_curve(net, predicted, h, samples);
    auto tc = degree_curve(net, truth, h, samples);
    // A hub whose true curve is flat is scored by its unnormalized RMSE.
    double err = 0.0;
    if (auto v = nrmse(pc, tc)) {
      err = *v;
    } else {
      for (std::size_t i = 0; i < pc.size(); ++i) err += (pc[i] - tc[i]) * (pc[i] - tc[i]);
      err = std::sqrt(err / static_cast<double>(pc.size()));
    }
    r.nrmse.push_back(err);
    r.s.push_back(1.0 / (1.0 + err));
    r.predicted_curves.push_back(std::move(pc));
    r.truth_curves.push_back(std::move(tc));
  }
  r.area = radar_area(r.s);
  return r;
}

struct FeatureCorrelation {
  std::string column;
  double rho = 0.0;
  bool degenerate = false;  // constant column: rho reported as 0
};

/// Spearman rho of each column against alpha over the selected timed edges
/// (`selected` empty means all).
inline std::vector<FeatureCorrelation> feature_time_correlation(const FeatureMatrix& fm,
                                                                const TemporalNetwork& net,
                                                                const std::vector<bool>& selected = {}) {
  if (fm.rows() != net.edge_count()) throw Error(ErrorKind::RowMismatch, "feature rows vs edges");
  std::vector<EdgeId> use;
  for (EdgeId e = 0; e < net.edge_count(); ++e) {
    if (net.edge(e).has_time() && (selected.empty() || selected[e])) use.push_back(e);
  }
  if (use.size() < 2) throw Error(ErrorKind::InsufficientLabels, "need at least two timed edges");
  std::vector<double> alpha;
  for (EdgeId e : use) alpha.push_back(*net.edge(e).alpha);
  std::vector<FeatureCorrelation> out;
  for (std::size_t c = 0; c < fm.cols(); ++c) {
    std::vector<double> col;
    for (EdgeId e : use) col.push_back(fm.values(e, c));
    const auto rho = spearman(col, alpha);
    out.push_back({fm.columns[c], rho.value_or(0.0), !rho.has_value()});
  }
  return out;
}

struct EvalOptions {
  std::size_t bins = 10;
  std::size_t samples = 50;
  std::size_t top_k = 5;
  /// Edges whose pairs count toward pairwise accuracy; empty = all timed.
  std::vector<bool> accuracy_edges;
};

struct EvalReport {
  double pairwise_accuracy = 0.0;
  std::size_t accuracy_pairs = 0;
  double spearman_rho = 0.0;
  BinTrend bin_trend;
  std::optional<double> clustering_nrmse;
  std::optional<double> gini_nrmse;
  std::vector<double> clustering_pred, clustering_truth, gini_pred, gini_truth;
  HubRadar hub_radar;
  std::vector<FeatureCorrelation> feature_correlations;
};

/// Full metric suite for an ordering of every edge of `net`. Requires all
/// edges to carry a ground-truth time.
inline EvalReport evaluate(const TemporalNetwork& net, const GlobalOrdering& ordering,
                           const FeatureMatrix* features = nullptr, const EvalOptions& opt = {}) {
  if (ordering.size() != net.edge_count()) {
    throw Error(ErrorKind::CoverageError, "ordering covers " + std::to_string(ordering.size()) +
                                              " of " + std::to_string(net.edge_count()) + " edges");
  }
  for (const auto& e : net.edges()) {
    if (!e.has_time()) throw Error(ErrorKind::CoverageError, "evaluation needs a time for every edge");
  }
  EvalReport r;
  const auto pairs = distinguishable_pairs(net, opt.accuracy_edges);
  r.accuracy_pairs = pairs.size();
  r.pairwise_accuracy = netchron::pairwise_accuracy(ordering, pairs);
  r.spearman_rho = netchron::spearman_rho(ordering, net);
  const auto truth = ground_truth_ordering(net);
  r.bin_trend = binned_trend(ordering.rank, truth.rank, opt.bins);
  const auto pred_seq = ordering.sequence();
  const auto true_seq = truth.sequence();
  r.clustering_pred = property_curve(net, pred_seq, TrajectoryProperty::Clustering, opt.samples);
  r.clustering_truth = property_curve(net, true_seq, TrajectoryProperty::Clustering, opt.samples);
  r.gini_pred = property_curve(net, pred_seq, TrajectoryProperty::DegreeGini, opt.samples);
  r.gini_truth = property_curve(net, true_seq, TrajectoryProperty::DegreeGini, opt.samples);
  r.clustering_nrmse = nrmse(r.clustering_pred, r.clustering_truth);
  r.gini_nrmse = nrmse(r.gini_pred, r.gini_truth);
  r.hub_radar = netchron::hub_radar(net, pred_seq, true_seq, std::min(opt.top_k, net.node_count()),
                                    opt.samples);
  if (features) r.feature_correlations = feature_time_correlation(*features, net);
  return r;
}

}  // namespace netchron
