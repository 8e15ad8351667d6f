#pragma once

// Pairwise precedence learning. Each edge gets an independent scalar score
// z_e = W2·σ(W1·f(e) + b1) + b2 over f(e) = [struct, state, coupled];
// P(a before b) = softmax(z_a, z_b). Trained with pairwise cross-entropy and
// an L2 penalty on the scorer parameters; gradients flow back through the
// propagation encoder.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <utility>
#include <vector>

#include "netchron/coupling.hpp"
#include "netchron/datasets.hpp"
#include "netchron/error.hpp"
#include "netchron/features.hpp"
#include "netchron/graph.hpp"
#include "netchron/matrix.hpp"
#include "netchron/random.hpp"

namespace netchron {

struct CpnnModel {
  PropagationWeights propagation;  // zero layers: coupling disabled
  Matrix w1;                       // d x h
  Matrix b1;                       // 1 x h
  Matrix w2;                       // h x 1
  Matrix b2;                       // 1 x 1
  Activation activation = Activation::Tanh;
  FeatureMode mode = FeatureMode::Both;
  std::vector<std::string> feature_columns;  // struct/state columns, in order

  bool coupled() const noexcept { return propagation.layers() > 0; }
  std::size_t coupled_dim() const noexcept { return coupled() ? 4 * propagation.output_dim() : 0; }
  std::size_t input_dim() const noexcept { return w1.rows(); }
  std::size_t hidden_dim() const noexcept { return w1.cols(); }
};

/// Gradient (or optimizer moment) with the same shapes as a model.
struct CpnnGradients {
  std::vector<Matrix> self_weights;
  std::vector<Matrix> neighbor_weights;
  Matrix w1, b1, w2, b2;

  static CpnnGradients zeros_like(const CpnnModel& m) {
    CpnnGradients g;
    for (const auto& w : m.propagation.self_weights) g.self_weights.emplace_back(w.rows(), w.cols());
    for (const auto& w : m.propagation.neighbor_weights) {
      g.neighbor_weights.emplace_back(w.rows(), w.cols());
    }
    g.w1 = Matrix(m.w1.rows(), m.w1.cols());
    g.b1 = Matrix(m.b1.rows(), m.b1.cols());
    g.w2 = Matrix(m.w2.rows(), m.w2.cols());
    g.b2 = Matrix(1, 1);
    return g;
  }
};

/// Visits every parameter tensor in a fixed order.
template <typename Model, typename F>
void for_each_parameter(Model& m, F&& fn) {
  if constexpr (std::is_same_v<std::remove_const_t<Model>, CpnnModel>) {
    for (std::size_t l = 0; l < m.propagation.layers(); ++l) {
      fn(m.propagation.self_weights[l]);
      fn(m.propagation.neighbor_weights[l]);
    }
  } else {
    for (std::size_t l = 0; l < m.self_weights.size(); ++l) {
      fn(m.self_weights[l]);
      fn(m.neighbor_weights[l]);
    }
  }
  fn(m.w1);
  fn(m.b1);
  fn(m.w2);
  fn(m.b2);
}

/// Per-edge inputs shared by training and inference. `base` holds the
/// normalized struct/state columns selected by the mode.
struct EdgeInputs {
  FeatureMatrix base;
  Matrix node_inputs;  // standardized [k, C, core, x] per node
};

/// [f_struct, f_state, f_cpl] concatenated; either table may be absent
/// according to the mode.
inline FeatureMatrix assemble_representation(const FeatureMatrix* struct_fm,
                                             const FeatureMatrix* state_fm,
                                             const FeatureMatrix* coupled) {
  std::vector<const FeatureMatrix*> parts;
  for (const auto* p : {struct_fm, state_fm, coupled}) {
    if (p) parts.push_back(p);
  }
  if (parts.empty()) throw Error(ErrorKind::BadDims, "no feature blocks to assemble");
  return concat_columns(parts);
}

inline CpnnModel init_model(const std::vector<std::string>& base_columns,
                            std::span<const std::size_t> propagation_dims, std::size_t hidden,
                            std::uint64_t seed, Activation activation = Activation::Tanh,
                            Aggregation aggregation = Aggregation::Mean,
                            FeatureMode mode = FeatureMode::Both) {
  if (hidden == 0) throw Error(ErrorKind::BadDims, "hidden width must be positive");
  CpnnModel m;
  m.propagation = init_weights(propagation_dims, seed, activation, aggregation);
  m.activation = activation;
  m.mode = mode;
  m.feature_columns = base_columns;
  const std::size_t d = base_columns.size() + m.coupled_dim();
  if (d == 0) throw Error(ErrorKind::BadDims, "empty edge representation");
  m.w1 = Matrix(d, hidden);
  m.b1 = Matrix(1, hidden);
  m.w2 = Matrix(hidden, 1);
  m.b2 = Matrix(1, 1);
  Rng rng = make_rng(seed, 0x5c);
  fill_glorot(m.w1, rng);
  fill_glorot(m.w2, rng);
  return m;
}

/// z = W2·σ(W1·f + b1) + b2 for a single representation row.
inline double score(const CpnnModel& m, std::span<const double> f) {
  if (f.size() != m.input_dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "edge representation has width " + std::to_string(f.size()) + ", model expects " +
                    std::to_string(m.input_dim()));
  }
  double z = m.b2(0, 0);
  for (std::size_t c = 0; c < m.hidden_dim(); ++c) {
    double a = m.b1(0, c);
    for (std::size_t k = 0; k < f.size(); ++k) a += f[k] * m.w1(k, c);
    z += m.w2(c, 0) * activate(m.activation, a);
  }
  return z;
}

/// P(a before b) = exp(z_a) / (exp(z_a) + exp(z_b)), evaluated stably.
inline double pair_probability(double za, double zb) {
  const double d = za - zb;
  if (d >= 0.0) return 1.0 / (1.0 + std::exp(-d));
  const double e = std::exp(d);
  return e / (1.0 + e);
}

/// log(1 + exp(x)) without overflow.
inline double softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

struct PairSample {
  EdgeId a = 0;
  EdgeId b = 0;
  int y = 0;  // 1 when a formed before b
};

/// Fraction of pairs whose precedence the scores predict correctly
/// (higher score = earlier); equal scores earn half credit.
inline double pairwise_accuracy(std::span<const double> scores, std::span<const PairSample> pairs) {
  if (pairs.empty()) throw Error(ErrorKind::EmptyPairs, "no pairs to evaluate");
  double correct = 0.0;
  for (const auto& p : pairs) {
    const double za = scores[p.a];
    const double zb = scores[p.b];
    if (za == zb) {
      correct += 0.5;
    } else if ((za > zb) == (p.y == 1)) {
      correct += 1.0;
    }
  }
  return correct / static_cast<double>(pairs.size());
}

struct PairSplit {
  std::vector<bool> labeled_mask;
  std::vector<PairSample> train;
  std::vector<PairSample> validation;
};

/// Labels ceil(fraction*M) edges, then draws up to `pair_budget` pairs
/// uniformly from labeled pairs with different alphas. Each pair gets a
/// random orientation. A `validation_fraction` share is held out.
inline PairSplit make_pairs(const TemporalNetwork& net, double label_fraction,
                            std::size_t pair_budget, std::uint64_t seed,
                            double validation_fraction = 0.1) {
  const TemporalNetwork labeled = split_labels(net, label_fraction, seed);
  PairSplit split;
  split.labeled_mask = labeled.labeled_mask();
  std::vector<EdgeId> lab;
  for (EdgeId e = 0; e < net.edge_count(); ++e) {
    if (split.labeled_mask[e]) lab.push_back(e);
  }
  std::vector<PairSample> all;
  for (std::size_t x = 0; x < lab.size(); ++x) {
    for (std::size_t y = x + 1; y < lab.size(); ++y) {
      if (*net.edge(lab[x]).alpha != *net.edge(lab[y]).alpha) all.push_back({lab[x], lab[y], 0});
    }
  }
  if (all.empty()) {
    throw Error(ErrorKind::InsufficientLabels, "need two labeled edges with distinct times");
  }
  Rng rng = make_rng(seed, 0xa1);
  shuffle(all, rng);
  if (all.size() > pair_budget) all.resize(pair_budget);
  for (auto& p : all) {
    if (rng() & 1u) std::swap(p.a, p.b);
    p.y = *net.edge(p.a).alpha < *net.edge(p.b).alpha ? 1 : 0;
  }
  std::size_t n_val = static_cast<std::size_t>(std::floor(validation_fraction * all.size()));
  if (n_val >= all.size()) n_val = all.size() - 1;
  split.validation.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n_val));
  split.train.assign(all.begin() + static_cast<std::ptrdiff_t>(n_val), all.end());
  return split;
}

/// Forward state for a subset of edges.
struct ScoringPass {
  Propagation propagation;
  std::vector<EdgeId> edges;  // scored edges, one row each
  Matrix features;            // rows x d
  Matrix hidden;              // rows x h, post-activation
  std::vector<double> z;
};

inline ScoringPass forward_edges(const CpnnModel& m, const TemporalNetwork& net,
                                 const EdgeInputs& in, std::vector<EdgeId> edges) {
  if (in.base.rows() != net.edge_count()) {
    throw Error(ErrorKind::RowMismatch, "edge inputs do not match the network");
  }
  if (in.base.cols() + m.coupled_dim() != m.input_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "edge inputs do not match the model width");
  }
  ScoringPass p;
  if (m.coupled()) p.propagation = propagate(net, in.node_inputs, m.propagation);
  p.edges = std::move(edges);
  const std::size_t rows = p.edges.size();
  const std::size_t base = in.base.cols();
  p.features = Matrix(rows, m.input_dim());
  for (std::size_t r = 0; r < rows; ++r) {
    const EdgeId e = p.edges[r];
    auto f = p.features.row(r);
    const auto src = in.base.values.row(e);
    std::copy(src.begin(), src.end(), f.begin());
    if (m.coupled()) {
      coupled_row(p.propagation.embeddings(), net.edge(e).u, net.edge(e).v, f.subspan(base));
    }
  }
  p.hidden = Matrix(rows, m.hidden_dim());
  for (std::size_t r = 0; r < rows; ++r) {
    auto h = p.hidden.row(r);
    std::copy(m.b1.row(0).begin(), m.b1.row(0).end(), h.begin());
  }
  gemm_acc(p.features, m.w1, p.hidden);
  for (double& v : p.hidden.values()) v = activate(m.activation, v);
  p.z.assign(rows, m.b2(0, 0));
  for (std::size_t r = 0; r < rows; ++r) {
    const auto h = p.hidden.row(r);
    for (std::size_t c = 0; c < h.size(); ++c) p.z[r] += h[c] * m.w2(c, 0);
  }
  return p;
}

/// Scores every edge of `net`.
inline std::vector<double> score_edges(const CpnnModel& m, const TemporalNetwork& net,
                                       const EdgeInputs& in) {
  std::vector<EdgeId> all(net.edge_count());
  for (EdgeId e = 0; e < all.size(); ++e) all[e] = e;
  return forward_edges(m, net, in, std::move(all)).z;
}

/// Reverse pass from dLoss/dz (one entry per scored row) to all parameters.
inline CpnnGradients backward_edges(const CpnnModel& m, const TemporalNetwork& net,
                                    const ScoringPass& p, std::span<const double> grad_z) {
  CpnnGradients g = CpnnGradients::zeros_like(m);
  const std::size_t rows = p.edges.size();
  Matrix grad_pre(rows, m.hidden_dim());
  for (std::size_t r = 0; r < rows; ++r) {
    const double gz = grad_z[r];
    g.b2(0, 0) += gz;
    const auto h = p.hidden.row(r);
    auto gp = grad_pre.row(r);
    for (std::size_t c = 0; c < h.size(); ++c) {
      g.w2(c, 0) += gz * h[c];
      gp[c] = gz * m.w2(c, 0) * activate_grad_from_output(m.activation, h[c]);
      g.b1(0, c) += gp[c];
    }
  }
  gemm_tn_acc(p.features, grad_pre, g.w1);
  if (m.coupled()) {
    Matrix grad_f(rows, m.input_dim());
    gemm_nt_acc(grad_pre, m.w1, grad_f);
    const Matrix& emb = p.propagation.embeddings();
    Matrix grad_h(emb.rows(), emb.cols());
    const std::size_t base = m.input_dim() - m.coupled_dim();
    for (std::size_t r = 0; r < rows; ++r) {
      const EdgeId e = p.edges[r];
      coupled_row_backward(emb, net.edge(e).u, net.edge(e).v, grad_f.row(r).subspan(base), grad_h);
    }
    auto pg = propagate_backward(net, m.propagation, p.propagation, std::move(grad_h));
    g.self_weights = std::move(pg.self_weights);
    g.neighbor_weights = std::move(pg.neighbor_weights);
  }
  return g;
}

struct LossResult {
  double value = 0.0;
  double pair_term = 0.0;
  CpnnGradients gradients;
};

inline double l2_penalty(const CpnnModel& m) {
  return squared_norm(m.w1) + squared_norm(m.w2) + squared_norm(m.b1) + squared_norm(m.b2);
}

/// Σ_pairs −[y log P(a≺b) + (1−y) log P(b≺a)] + η(‖W1‖²+‖W2‖²+‖b1‖²+‖b2‖²)
/// with gradients for every parameter.
inline LossResult loss(const CpnnModel& m, const TemporalNetwork& net, const EdgeInputs& in,
                       std::span<const PairSample> pairs, double eta) {
  if (pairs.empty()) throw Error(ErrorKind::EmptyPairs, "loss needs at least one pair");
  std::unordered_map<EdgeId, std::size_t> row_of;
  std::vector<EdgeId> edges;
  for (const auto& p : pairs) {
    for (EdgeId e : {p.a, p.b}) {
      if (row_of.try_emplace(e, edges.size()).second) edges.push_back(e);
    }
  }
  const ScoringPass pass = forward_edges(m, net, in, std::move(edges));
  std::vector<double> grad_z(pass.edges.size(), 0.0);
  LossResult res;
  for (const auto& p : pairs) {
    const std::size_t ra = row_of[p.a];
    const std::size_t rb = row_of[p.b];
    const double d = pass.z[ra] - pass.z[rb];
    res.pair_term += p.y == 1 ? softplus(-d) : softplus(d);
    const double g = pair_probability(pass.z[ra], pass.z[rb]) - static_cast<double>(p.y);
    grad_z[ra] += g;
    grad_z[rb] -= g;
  }
  res.gradients = backward_edges(m, net, pass, grad_z);
  res.value = res.pair_term + eta * l2_penalty(m);
  auto add_decay = [eta](Matrix& grad, const Matrix& w) {
    for (std::size_t k = 0; k < w.size(); ++k) grad.values()[k] += 2.0 * eta * w.values()[k];
  };
  add_decay(res.gradients.w1, m.w1);
  add_decay(res.gradients.b1, m.b1);
  add_decay(res.gradients.w2, m.w2);
  add_decay(res.gradients.b2, m.b2);
  return res;
}

struct TrainConfig {
  double learning_rate = 1e-3;
  double l2_coeff = 30.0;
  std::size_t epochs = 200;
  std::size_t batch_size = 256;
  std::size_t pair_budget = 100000;
  double label_fraction = 0.3;
  double validation_fraction = 0.1;
  std::uint64_t seed = 0;
  FeatureMode mode = FeatureMode::Both;
  std::size_t hidden = 64;
  std::vector<std::size_t> propagation_dims = {4, 32, 32};
  Activation activation = Activation::Tanh;
  Aggregation aggregation = Aggregation::Mean;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;

  void validate() const {
    if (l2_coeff < 0.0) throw Error(ErrorKind::BadSpec, "l2 coefficient must be >= 0");
    if (!(label_fraction > 0.0 && label_fraction < 1.0)) {
      throw Error(ErrorKind::BadSpec, "label fraction must lie in (0,1)");
    }
    if (!(learning_rate > 0.0) || epochs == 0 || batch_size == 0 || pair_budget == 0) {
      throw Error(ErrorKind::BadSpec, "learning rate, epochs, batch size and pair budget must be positive");
    }
  }
};

struct EpochLog {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double validation_loss = 0.0;
  double validation_accuracy = 0.0;
};

struct TrainResult {
  CpnnModel model;
  std::vector<EpochLog> log;
  std::size_t best_epoch = 0;
  PairSplit pairs;
};

namespace detail {

inline double pair_loss_only(std::span<const double> scores, std::span<const PairSample> pairs) {
  double s = 0.0;
  for (const auto& p : pairs) {
    const double d = scores[p.a] - scores[p.b];
    s += p.y == 1 ? softplus(-d) : softplus(d);
  }
  return s;
}

}  // namespace detail

/// Mini-batch Adam on the pairwise objective. Returns the model of the
/// epoch with the best validation accuracy (lower validation loss breaks
/// ties) and the per-epoch log. Deterministic given config.seed.
inline TrainResult train(const TemporalNetwork& net, const EdgeInputs& in, const TrainConfig& cfg) {
  cfg.validate();
  TrainResult res;
  res.pairs = make_pairs(net, cfg.label_fraction, cfg.pair_budget, cfg.seed, cfg.validation_fraction);
  CpnnModel model = init_model(in.base.columns, cfg.propagation_dims, cfg.hidden, cfg.seed,
                               cfg.activation, cfg.aggregation, cfg.mode);
  CpnnGradients m1 = CpnnGradients::zeros_like(model);
  CpnnGradients m2 = CpnnGradients::zeros_like(model);

  std::vector<PairSample> order = res.pairs.train;
  const auto& val = res.pairs.validation;
  const std::span<const PairSample> eval_set = val.empty() ? std::span<const PairSample>(res.pairs.train)
                                                           : std::span<const PairSample>(val);
  Rng rng = make_rng(cfg.seed, 0xb7);
  std::size_t step = 0;
  double best_acc = -1.0;
  double best_loss = std::numeric_limits<double>::infinity();

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    shuffle(order, rng);
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      const std::span<const PairSample> batch(order.data() + start, end - start);
      LossResult lr = loss(model, net, in, batch, cfg.l2_coeff);
      ++step;
      const double c1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(step));
      std::vector<Matrix*> params, grads, first, second;
      for_each_parameter(model, [&](Matrix& w) { params.push_back(&w); });
      for_each_parameter(lr.gradients, [&](Matrix& w) { grads.push_back(&w); });
      for_each_parameter(m1, [&](Matrix& w) { first.push_back(&w); });
      for_each_parameter(m2, [&](Matrix& w) { second.push_back(&w); });
      for (std::size_t t = 0; t < params.size(); ++t) {
        auto w = params[t]->values();
        auto g = grads[t]->values();
        auto a = first[t]->values();
        auto b = second[t]->values();
        for (std::size_t k = 0; k < w.size(); ++k) {
          a[k] = cfg.adam_beta1 * a[k] + (1.0 - cfg.adam_beta1) * g[k];
          b[k] = cfg.adam_beta2 * b[k] + (1.0 - cfg.adam_beta2) * g[k] * g[k];
          w[k] -= cfg.learning_rate * (a[k] / c1) / (std::sqrt(b[k] / c2) + cfg.adam_eps);
        }
      }
    }

    const auto scores = score_edges(model, net, in);
    EpochLog entry;
    entry.epoch = epoch;
    entry.train_loss = detail::pair_loss_only(scores, res.pairs.train) + cfg.l2_coeff * l2_penalty(model);
    entry.train_accuracy = pairwise_accuracy(scores, res.pairs.train);
    entry.validation_loss = detail::pair_loss_only(scores, eval_set);
    entry.validation_accuracy = pairwise_accuracy(scores, eval_set);
    res.log.push_back(entry);
    if (entry.validation_accuracy > best_acc ||
        (entry.validation_accuracy == best_acc && entry.validation_loss < best_loss)) {
      best_acc = entry.validation_accuracy;
      best_loss = entry.validation_loss;
      res.model = model;
      res.best_epoch = epoch;
    }
  }
  return res;
}

}  // namespace netchron
