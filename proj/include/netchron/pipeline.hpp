#pragma once

// End-to-end glue: features -> coupling inputs -> training -> ordering.

#include <span>
#include <vector>

#include "netchron/coupling.hpp"
#include "netchron/dynamics.hpp"
#include "netchron/error.hpp"
#include "netchron/features.hpp"
#include "netchron/graph.hpp"
#include "netchron/ordering.hpp"
#include "netchron/ranker.hpp"

namespace netchron {

/// Raw structural and steady-state tables plus node statistics.
struct EdgeFeatureTables {
  std::vector<NodeStructStats> stats;
  FeatureMatrix structural;
  FeatureMatrix state;
};

inline EdgeFeatureTables compute_feature_tables(const TemporalNetwork& net,
                                                std::span<const double> state) {
  EdgeFeatureTables t;
  t.stats = node_struct_stats(net);
  const auto pr = pagerank(net);
  const auto bn = edge_betweenness(net);
  t.structural = structural_edge_features(net, t.stats, pr.values, bn);
  t.state = steady_state_edge_features(net, state);
  return t;
}

/// All 25 raw columns (structural then state).
inline FeatureMatrix raw_edge_features(const EdgeFeatureTables& t) {
  const FeatureMatrix* parts[] = {&t.structural, &t.state};
  return concat_columns(parts);
}

inline EdgeInputs prepare_inputs(const TemporalNetwork& net, std::span<const double> state,
                                 FeatureMode mode) {
  const auto tables = compute_feature_tables(net, state);
  EdgeInputs in;
  in.base = feature_subset(normalize(raw_edge_features(tables)), mode);
  in.node_inputs = node_input_matrix(net, tables.stats, state, mode != FeatureMode::StructOnly);
  return in;
}

/// Coupling is part of Both and StructOnly; the state-only variant uses the
/// steady-state columns alone.
inline TrainConfig config_for_mode(TrainConfig cfg, FeatureMode mode) {
  cfg.mode = mode;
  if (mode == FeatureMode::StateOnly) cfg.propagation_dims = {kNodeInputDim};
  return cfg;
}

inline TrainResult train_pipeline(const TemporalNetwork& net, std::span<const double> state,
                                  const TrainConfig& cfg) {
  const TrainConfig effective = config_for_mode(cfg, cfg.mode);
  const EdgeInputs in = prepare_inputs(net, state, effective.mode);
  return train(net, in, effective);
}

inline std::vector<double> infer_scores(const TemporalNetwork& net, std::span<const double> state,
                                        const CpnnModel& model) {
  const EdgeInputs in = prepare_inputs(net, state, model.mode);
  if (in.base.columns != model.feature_columns) {
    throw Error(ErrorKind::FeatureSchemaMismatch,
                "model feature columns do not match the features computed for this input");
  }
  if (in.base.cols() + model.coupled_dim() != model.input_dim()) {
    throw Error(ErrorKind::FeatureSchemaMismatch, "model input width does not match");
  }
  return score_edges(model, net, in);
}

inline GlobalOrdering infer_ordering(const TemporalNetwork& net, std::span<const double> state,
                                     const CpnnModel& model) {
  const auto z = infer_scores(net, state, model);
  return order_from_scores(z);
}

}  // namespace netchron
