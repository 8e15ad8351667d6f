#include <gtest/gtest.h>

#include <functional>

#include "netchron/io.hpp"
#include "netchron/pipeline.hpp"
#include "oracles.hpp"

using namespace netchron;
using netchron::io::json;

namespace {

TemporalNetwork small_timed() {
  return generate_synthetic({SynthKind::PreferentialAttachment, 30, 2, 4});
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::IoError;
}

}  // namespace

TEST(ModelJson, RoundTripIsExact) {
  const auto net = small_timed();
  const auto state = simulate(net, DynamicsSpec{}).values;
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.hidden = 6;
  cfg.propagation_dims = {4, 5, 3};
  cfg.seed = 3;
  const auto res = train_pipeline(net, state, cfg);
  const std::string text = io::dump(io::model_json(res.model, cfg, res.best_epoch));
  const auto back = io::model_from_json(json::parse(text));
  EXPECT_EQ(back.w1, res.model.w1);
  EXPECT_EQ(back.b1, res.model.b1);
  EXPECT_EQ(back.w2, res.model.w2);
  EXPECT_EQ(back.b2, res.model.b2);
  ASSERT_EQ(back.propagation.layers(), 2u);
  EXPECT_EQ(back.propagation.self_weights[1], res.model.propagation.self_weights[1]);
  EXPECT_EQ(back.feature_columns, res.model.feature_columns);
  EXPECT_EQ(infer_scores(net, state, back), infer_scores(net, state, res.model));
  EXPECT_EQ(io::dump(io::model_json(back, cfg, res.best_epoch)), text);
}

TEST(ModelJson, InconsistentShapesRejected) {
  const std::vector<std::size_t> dims = {4, 3};
  const auto m = init_model({"a", "b"}, dims, 4, 1);
  auto j = io::model_json(m, TrainConfig{}, 1);
  j["weights"]["w1"] = io::matrix_json(Matrix(5, 4));
  EXPECT_EQ(kind_of([&] { io::model_from_json(j); }), ErrorKind::BadDims);
  j["format"] = "other";
  EXPECT_EQ(kind_of([&] { io::model_from_json(j); }), ErrorKind::ParseError);
}

TEST(SchemaMismatch, ModelFromOtherModeRejected) {
  const auto net = small_timed();
  const auto state = simulate(net, DynamicsSpec{}).values;
  const std::vector<std::size_t> none = {4};
  auto m = init_model(state_columns(), none, 4, 1, Activation::Tanh, Aggregation::Mean,
                      FeatureMode::StateOnly);
  m.feature_columns[0] = "renamed";
  EXPECT_EQ(kind_of([&] { infer_scores(net, state, m); }), ErrorKind::FeatureSchemaMismatch);
}

TEST(OrderingCsv, RoundTrip) {
  const auto net = small_timed();
  std::vector<double> z(net.edge_count());
  Rng rng = make_rng(91, 0);
  for (auto& v : z) v = uniform(rng, -3, 3);
  const auto o = order_from_scores(z);
  const auto text = io::ordering_csv(net, o);
  EXPECT_EQ(text.substr(0, text.find('\n')), "u,v,borda_score,rank");
  const auto back = io::parse_ordering_csv(text, net);
  EXPECT_EQ(back.rank, o.rank);
  EXPECT_EQ(back.borda_scores, o.borda_scores);
  EXPECT_EQ(io::ordering_csv(net, back), text);
}

TEST(OrderingCsv, CoverageAndPermutationErrors) {
  const auto net = oracle::to_network(3, {{0, 1}, {1, 2}});
  EXPECT_EQ(kind_of([&] { io::parse_ordering_csv("u,v,borda_score,rank\n0,1,1,1\n", net); }),
            ErrorKind::CoverageError);
  EXPECT_EQ(kind_of([&] { io::parse_ordering_csv("u,v,borda_score,rank\n0,1,1,1\n0,2,0,2\n", net); }),
            ErrorKind::CoverageError);
  EXPECT_EQ(kind_of([&] { io::parse_ordering_csv("u,v,borda_score,rank\n0,1,1,1\n1,0,0,2\n", net); }),
            ErrorKind::CoverageError);
  EXPECT_EQ(kind_of([&] { io::parse_ordering_csv("u,v,borda_score,rank\n0,1,1,1\n2,1,0,1\n", net); }),
            ErrorKind::InvalidPermutation);
  EXPECT_EQ(kind_of([&] { io::parse_ordering_csv("u,v,borda_score,rank\n0,1,1,1\n1,2,x,2\n", net); }),
            ErrorKind::ParseError);
  // endpoints may be listed in either order
  const auto ok = io::parse_ordering_csv("u,v,borda_score,rank\n2,1,0.7,1\n1,0,0.3,2\n", net);
  EXPECT_EQ(ok.rank, (std::vector<std::size_t>{2, 1}));
}

TEST(SteadyStateCsv, RoundTripAndErrors) {
  SteadyState st;
  st.values = {0.1, 1.0 / 3.0, 0.0, 0.999};
  const auto text = io::steady_state_csv(st);
  EXPECT_EQ(io::parse_steady_state_csv(text, 4), st.values);
  EXPECT_EQ(kind_of([&] { io::parse_steady_state_csv(text, 5); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([&] { io::parse_steady_state_csv("node_id,value\n0,1\n0,2\n", 2); }),
            ErrorKind::ParseError);
  EXPECT_EQ(kind_of([&] { io::parse_steady_state_csv("node_id,value\n0,abc\n", 1); }),
            ErrorKind::ParseError);
}

TEST(TrainingLog, LabeledEdgesRoundTrip) {
  const auto net = small_timed();
  const auto state = simulate(net, DynamicsSpec{}).values;
  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.hidden = 4;
  cfg.propagation_dims = {4};
  cfg.mode = FeatureMode::StateOnly;
  const auto res = train_pipeline(net, state, cfg);
  const auto log = json::parse(io::dump(io::training_log_json(res, net, cfg)));
  EXPECT_EQ(log.at("label_fraction").get<double>(), 0.3);
  EXPECT_EQ(io::labeled_mask_from_log(log, net), res.pairs.labeled_mask);
  auto bad = log;
  bad["labeled_edges"].push_back({0, 999});
  EXPECT_EQ(kind_of([&] { io::labeled_mask_from_log(bad, net); }), ErrorKind::CoverageError);
}
