#pragma once

// File formats: steady-state CSV + JSON sidecar, feature CSV, model
// checkpoint JSON, ordering CSV, evaluation report JSON and plot CSVs.

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "netchron/datasets.hpp"
#include "netchron/dynamics.hpp"
#include "netchron/error.hpp"
#include "netchron/eval.hpp"
#include "netchron/features.hpp"
#include "netchron/ordering.hpp"
#include "netchron/ranker.hpp"

namespace netchron::io {

using json = nlohmann::ordered_json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
  out << content;
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path);
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---- steady state -----------------------------------------------------------

inline std::string steady_state_csv(const SteadyState& st) {
  std::string out = "node_id,value\n";
  for (std::size_t i = 0; i < st.values.size(); ++i) {
    out += std::to_string(i) + "," + format_double(st.values[i]) + "\n";
  }
  return out;
}

inline json steady_state_metadata(const SteadyState& st, const DynamicsSpec& spec) {
  json j;
  j["kind"] = std::string(to_string(spec.kind));
  j["seed"] = spec.seed;
  j["converged"] = st.converged;
  j["steps"] = st.steps;
  j["residual"] = st.residual;
  j["tol"] = spec.tol;
  j["max_steps"] = spec.max_steps;
  if (spec.kind == DynamicsKind::SIS) {
    j["beta"] = spec.beta;
    j["delta"] = spec.delta;
  } else if (spec.kind == DynamicsKind::Gene) {
    j["hill_n"] = spec.hill_n;
  }
  return j;
}

/// Reads `node_id,value` rows; every node 0..N-1 must appear once.
inline std::vector<double> parse_steady_state_csv(const std::string& text, std::size_t node_count) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::vector<double> values(node_count, 0.0);
  std::vector<bool> seen(node_count, false);
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || lineno == 1) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorKind::ParseError, "steady state line " + std::to_string(lineno));
    }
    std::size_t id = 0;
    double v = 0.0;
    try {
      id = std::stoul(line.substr(0, comma));
      v = std::stod(line.substr(comma + 1));
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "steady state line " + std::to_string(lineno));
    }
    if (id >= node_count || seen[id]) {
      throw Error(ErrorKind::ParseError, "steady state node id out of range or repeated at line " +
                                             std::to_string(lineno));
    }
    values[id] = v;
    seen[id] = true;
  }
  for (std::size_t i = 0; i < node_count; ++i) {
    if (!seen[i]) throw Error(ErrorKind::ParseError, "steady state missing node " + std::to_string(i));
  }
  return values;
}

// ---- features -----------------------------------------------------------------

inline std::string feature_csv(const FeatureMatrix& fm, const TemporalNetwork& net) {
  if (fm.rows() != net.edge_count()) throw Error(ErrorKind::RowMismatch, "feature rows vs edges");
  std::string out = "u,v";
  for (const auto& c : fm.columns) out += "," + c;
  out += "\n";
  for (std::size_t r = 0; r < fm.rows(); ++r) {
    out += std::to_string(net.edge(r).u) + "," + std::to_string(net.edge(r).v);
    for (std::size_t c = 0; c < fm.cols(); ++c) out += "," + format_double(fm.values(r, c));
    out += "\n";
  }
  return out;
}

inline json normalization_stats(const FeatureMatrix& fm) {
  json cols = json::array();
  for (std::size_t c = 0; c < fm.stats.size(); ++c) {
    const auto& s = fm.stats[c];
    cols.push_back({{"column", fm.columns[c]}, {"min", s.min}, {"max", s.max}, {"mean", s.mean},
                    {"std", s.std}, {"degenerate", s.degenerate}});
  }
  return {{"epsilon", kEpsilon}, {"columns", cols}};
}

// ---- model checkpoint ---------------------------------------------------------

inline json matrix_json(const Matrix& m) {
  json data = json::array();
  for (double v : m.values()) data.push_back(v);
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

inline Matrix matrix_from_json(const json& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  const auto& data = j.at("data");
  if (data.size() != m.size()) throw Error(ErrorKind::ParseError, "matrix data length mismatch");
  for (std::size_t k = 0; k < m.size(); ++k) m.values()[k] = data[k].get<double>();
  return m;
}

inline json train_config_json(const TrainConfig& c) {
  return {{"learning_rate", c.learning_rate},
          {"l2_coeff", c.l2_coeff},
          {"epochs", c.epochs},
          {"batch_size", c.batch_size},
          {"pair_budget", c.pair_budget},
          {"label_fraction", c.label_fraction},
          {"validation_fraction", c.validation_fraction},
          {"seed", c.seed},
          {"mode", std::string(to_string(c.mode))},
          {"hidden", c.hidden},
          {"propagation_dims", c.propagation_dims},
          {"activation", std::string(to_string(c.activation))},
          {"aggregation", std::string(to_string(c.aggregation))}};
}

inline json model_json(const CpnnModel& m, const TrainConfig& cfg, std::size_t best_epoch) {
  json layers = json::array();
  for (std::size_t l = 0; l < m.propagation.layers(); ++l) {
    layers.push_back({{"self", matrix_json(m.propagation.self_weights[l])},
                      {"neighbor", matrix_json(m.propagation.neighbor_weights[l])}});
  }
  json j;
  j["format"] = "netchron-cpnn";
  j["version"] = 1;
  j["mode"] = std::string(to_string(m.mode));
  j["activation"] = std::string(to_string(m.activation));
  j["aggregation"] = std::string(to_string(m.propagation.aggregation));
  j["propagation_dims"] = m.propagation.dims;
  j["input_dim"] = m.input_dim();
  j["hidden"] = m.hidden_dim();
  j["feature_columns"] = m.feature_columns;
  j["seed"] = cfg.seed;
  j["best_epoch"] = best_epoch;
  j["config"] = train_config_json(cfg);
  j["weights"] = {{"propagation", layers},
                  {"w1", matrix_json(m.w1)},
                  {"b1", matrix_json(m.b1)},
                  {"w2", matrix_json(m.w2)},
                  {"b2", matrix_json(m.b2)}};
  return j;
}

inline CpnnModel model_from_json(const json& j) {
  if (j.value("format", "") != "netchron-cpnn") {
    throw Error(ErrorKind::ParseError, "not a netchron model checkpoint");
  }
  CpnnModel m;
  const auto mode = parse_feature_mode(j.at("mode").get<std::string>());
  const auto act = parse_activation(j.at("activation").get<std::string>());
  const auto agg = parse_aggregation(j.at("aggregation").get<std::string>());
  if (!mode || !act || !agg) throw Error(ErrorKind::ParseError, "unknown mode/activation/aggregation");
  m.mode = *mode;
  m.activation = *act;
  m.propagation.activation = *act;
  m.propagation.aggregation = *agg;
  m.propagation.dims = j.at("propagation_dims").get<std::vector<std::size_t>>();
  m.feature_columns = j.at("feature_columns").get<std::vector<std::string>>();
  const auto& w = j.at("weights");
  for (const auto& layer : w.at("propagation")) {
    m.propagation.self_weights.push_back(matrix_from_json(layer.at("self")));
    m.propagation.neighbor_weights.push_back(matrix_from_json(layer.at("neighbor")));
  }
  m.w1 = matrix_from_json(w.at("w1"));
  m.b1 = matrix_from_json(w.at("b1"));
  m.w2 = matrix_from_json(w.at("w2"));
  m.b2 = matrix_from_json(w.at("b2"));
  if (m.propagation.layers() + 1 != m.propagation.dims.size() ||
      m.w1.rows() != m.feature_columns.size() + m.coupled_dim() || m.b1.cols() != m.w1.cols() ||
      m.w2.rows() != m.w1.cols()) {
    throw Error(ErrorKind::BadDims, "checkpoint weight shapes are inconsistent");
  }
  return m;
}

inline json training_log_json(const TrainResult& r, const TemporalNetwork& net, const TrainConfig& cfg) {
  json epochs = json::array();
  for (const auto& e : r.log) {
    epochs.push_back({{"epoch", e.epoch},
                      {"train_loss", e.train_loss},
                      {"train_accuracy", e.train_accuracy},
                      {"validation_loss", e.validation_loss},
                      {"validation_accuracy", e.validation_accuracy}});
  }
  json labeled = json::array();
  for (EdgeId e = 0; e < net.edge_count(); ++e) {
    if (r.pairs.labeled_mask[e]) labeled.push_back({net.edge(e).u, net.edge(e).v});
  }
  return {{"label_fraction", cfg.label_fraction},
          {"best_epoch", r.best_epoch},
          {"labeled_edge_count", labeled.size()},
          {"train_pairs", r.pairs.train.size()},
          {"validation_pairs", r.pairs.validation.size()},
          {"labeled_edges", labeled},
          {"epochs", epochs}};
}

/// Mask of edges listed under "labeled_edges" in a training log.
inline std::vector<bool> labeled_mask_from_log(const json& log, const TemporalNetwork& net) {
  std::map<std::pair<NodeId, NodeId>, EdgeId> index;
  for (EdgeId e = 0; e < net.edge_count(); ++e) index[{net.edge(e).u, net.edge(e).v}] = e;
  std::vector<bool> mask(net.edge_count(), false);
  for (const auto& pair : log.at("labeled_edges")) {
    const NodeId a = pair.at(0).get<NodeId>(), b = pair.at(1).get<NodeId>();
    const auto it = index.find({std::min(a, b), std::max(a, b)});
    if (it == index.end()) throw Error(ErrorKind::CoverageError, "training log names an edge not in the graph");
    mask[it->second] = true;
  }
  return mask;
}

// ---- ordering -----------------------------------------------------------------

inline std::string ordering_csv(const TemporalNetwork& net, const GlobalOrdering& o) {
  if (o.size() != net.edge_count()) throw Error(ErrorKind::CoverageError, "ordering size vs edges");
  std::string out = "u,v,borda_score,rank\n";
  for (EdgeId e : o.sequence()) {
    out += std::to_string(net.edge(e).u) + "," + std::to_string(net.edge(e).v) + "," +
           format_double(o.borda_scores[e]) + "," + std::to_string(o.rank[e]) + "\n";
  }
  return out;
}

/// Parses an ordering CSV against `net`; every edge must appear exactly once
/// and the ranks must form a permutation.
inline GlobalOrdering parse_ordering_csv(const std::string& text, const TemporalNetwork& net) {
  std::map<std::pair<NodeId, NodeId>, EdgeId> index;
  for (EdgeId e = 0; e < net.edge_count(); ++e) index[{net.edge(e).u, net.edge(e).v}] = e;
  GlobalOrdering o;
  o.source = OrderingSource::FromScores;
  o.rank.assign(net.edge_count(), 0);
  o.borda_scores.assign(net.edge_count(), 0.0);
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0, rows = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || lineno == 1) continue;
    std::istringstream fields(line);
    std::string u, v, b, r;
    if (!std::getline(fields, u, ',') || !std::getline(fields, v, ',') ||
        !std::getline(fields, b, ',') || !std::getline(fields, r, ',')) {
      throw Error(ErrorKind::ParseError, "ordering line " + std::to_string(lineno));
    }
    NodeId a = 0, c = 0;
    double score = 0.0;
    std::size_t rank = 0;
    try {
      a = std::stoul(u);
      c = std::stoul(v);
      score = std::stod(b);
      rank = std::stoul(r);
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "ordering line " + std::to_string(lineno));
    }
    const auto it = index.find({std::min(a, c), std::max(a, c)});
    if (it == index.end()) {
      throw Error(ErrorKind::CoverageError, "ordering line " + std::to_string(lineno) + " names an unknown edge");
    }
    if (o.rank[it->second] != 0) {
      throw Error(ErrorKind::CoverageError, "edge listed twice at line " + std::to_string(lineno));
    }
    o.rank[it->second] = rank;
    o.borda_scores[it->second] = score;
    ++rows;
  }
  if (rows != net.edge_count()) {
    throw Error(ErrorKind::CoverageError, "ordering covers " + std::to_string(rows) + " of " +
                                              std::to_string(net.edge_count()) + " edges");
  }
  std::vector<bool> used(net.edge_count() + 1, false);
  for (std::size_t r : o.rank) {
    if (r == 0 || r > net.edge_count() || used[r]) {
      throw Error(ErrorKind::InvalidPermutation, "ordering ranks are not a permutation of 1..M");
    }
    used[r] = true;
  }
  return o;
}

// ---- evaluation report ----------------------------------------------------------

inline json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline json report_json(const EvalReport& r) {
  json bins = json::array();
  for (const auto& b : r.bin_trend.bins) {
    bins.push_back({{"bin", b.bin}, {"center", b.center}, {"median", b.median}, {"std", b.std},
                    {"count", b.count}});
  }
  json corr = json::object();
  json degenerate = json::array();
  for (const auto& c : r.feature_correlations) {
    corr[c.column] = c.rho;
    if (c.degenerate) degenerate.push_back(c.column);
  }
  return {{"pairwise_accuracy", r.pairwise_accuracy},
          {"accuracy_pairs", r.accuracy_pairs},
          {"spearman_rho", r.spearman_rho},
          {"bin_trend", {{"statistic", "median predicted normalized rank vs bin median true rank"},
                         {"rmse", r.bin_trend.rmse},
                         {"bins", bins}}},
          {"clustering_nrmse", optional_json(r.clustering_nrmse)},
          {"gini_nrmse", optional_json(r.gini_nrmse)},
          {"hub_radar", {{"hubs", r.hub_radar.hubs},
                         {"nrmse", r.hub_radar.nrmse},
                         {"s", r.hub_radar.s},
                         {"area", r.hub_radar.area}}},
          {"feature_correlations", corr},
          {"degenerate_features", degenerate}};
}

inline std::string bin_trend_csv(const BinTrend& t) {
  std::string out = "bin,center,median,std,count\n";
  for (const auto& b : t.bins) {
    out += std::to_string(b.bin) + "," + format_double(b.center) + "," + format_double(b.median) + "," +
           format_double(b.std) + "," + std::to_string(b.count) + "\n";
  }
  return out;
}

inline std::string trajectories_csv(const EvalReport& r) {
  std::string out = "fraction,clustering_pred,clustering_truth,gini_pred,gini_truth\n";
  const std::size_t n = r.clustering_pred.size();
  for (std::size_t s = 0; s < n; ++s) {
    out += format_double(static_cast<double>(s + 1) / static_cast<double>(n)) + "," +
           format_double(r.clustering_pred[s]) + "," + format_double(r.clustering_truth[s]) + "," +
           format_double(r.gini_pred[s]) + "," + format_double(r.gini_truth[s]) + "\n";
  }
  return out;
}

inline std::string radar_csv(const HubRadar& h) {
  std::string out = "axis,node,nrmse,s\n";
  for (std::size_t k = 0; k < h.hubs.size(); ++k) {
    out += std::to_string(k) + "," + std::to_string(h.hubs[k]) + "," + format_double(h.nrmse[k]) + "," +
           format_double(h.s[k]) + "\n";
  }
  return out;
}

inline json dataset_stats_json(const DatasetStats& s) {
  return {{"N", s.nodes}, {"E", s.edges}, {"E_d", s.distinguishable_pairs},
          {"P_E_d", s.distinguishable_fraction}, {"S", s.distinct_times}};
}

}  // namespace netchron::io
