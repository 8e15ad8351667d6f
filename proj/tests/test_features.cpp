#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "netchron/features.hpp"
#include "netchron/pipeline.hpp"
#include "oracles.hpp"

using namespace netchron;

namespace {

FeatureMatrix structural(const TemporalNetwork& net) {
  return structural_edge_features(net, node_struct_stats(net), pagerank(net).values,
                                  edge_betweenness(net));
}

std::size_t col(const FeatureMatrix& fm, const std::string& name) { return static_cast<std::size_t>(fm.find(name)); }

}  // namespace

TEST(StructuralFeatures, TriangleEdge) {
  const auto fm = structural(oracle::to_network(3, {{0, 1}, {1, 2}, {0, 2}}));
  ASSERT_EQ(fm.cols(), 18u);
  EXPECT_EQ(fm.values(0, col(fm, "CN")), 1.0);
  EXPECT_DOUBLE_EQ(fm.values(0, col(fm, "Jaccard")), 1.0 / (3.0 + kEpsilon));
  EXPECT_DOUBLE_EQ(fm.values(0, col(fm, "AA")), 1.0 / std::log(2.0 + kEpsilon));
  EXPECT_DOUBLE_EQ(fm.values(0, col(fm, "RA")), 0.5);
  EXPECT_DOUBLE_EQ(fm.values(0, col(fm, "ES")), 1.0 / (1.0 + kEpsilon));
}

TEST(StructuralFeatures, StarEdgeHasNoCommonNeighbours) {
  const auto fm = structural(oracle::to_network(4, {{0, 1}, {0, 2}, {0, 3}}));
  for (const char* name : {"CN", "Jaccard", "AA", "RA", "CC_edge"}) {
    EXPECT_EQ(fm.values(0, col(fm, name)), 0.0) << name;
  }
}

TEST(StructuralFeatures, ColumnNamesAreTheEighteen) {
  const std::vector<std::string> expected = {"k_i", "k_j", "k_sum", "k_prod", "k_min", "k_max",
                                             "C_i", "C_j", "CN", "Jaccard", "AA", "RA",
                                             "ES", "BN", "CC_edge", "LP", "PR", "KS"};
  EXPECT_EQ(structural_columns(), expected);
}

TEST(StructuralFeatures, RandomGraphsMatchSetArithmeticOracle) {
  Rng rng = make_rng(21, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 19);
    const auto edges = oracle::random_graph(n, 0.1 + 0.4 * uniform01(rng), rng);
    if (edges.empty()) continue;
    const auto fm = structural(oracle::to_network(n, edges));
    const auto ref = oracle::structural_table(n, edges);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      for (std::size_t c = 0; c < 18; ++c) {
        if (oracle::integer_column(c)) {
          EXPECT_EQ(fm.values(e, c), ref[e][c]) << fm.columns[c];
        } else {
          EXPECT_NEAR(fm.values(e, c), ref[e][c], 1e-9) << fm.columns[c];
        }
      }
    }
  }
}

TEST(StructuralFeatures, SymmetricColumnsInvariantUnderRelabeling) {
  Rng rng = make_rng(22, 0);
  const std::set<std::string> ordered = {"k_i", "k_j", "C_i", "C_j"};
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + uniform_index(rng, 12);
    const auto edges = oracle::random_graph(n, 0.3, rng);
    if (edges.empty()) continue;
    std::vector<NodeId> perm(n);
    for (NodeId i = 0; i < n; ++i) perm[i] = i;
    shuffle(perm, rng);
    oracle::EdgeList moved;
    for (auto [u, v] : edges) moved.emplace_back(perm[u], perm[v]);
    const auto a = structural(oracle::to_network(n, edges));
    const auto b = structural(oracle::to_network(n, moved));
    for (std::size_t e = 0; e < edges.size(); ++e) {
      for (std::size_t c = 0; c < a.cols(); ++c) {
        if (ordered.count(a.columns[c])) continue;
        EXPECT_NEAR(a.values(e, c), b.values(e, c), 1e-9) << a.columns[c];
      }
      // the ordered pairs swap as a unit
      const double ki = a.values(e, 0), kj = a.values(e, 1);
      const double bi = b.values(e, 0), bj = b.values(e, 1);
      EXPECT_TRUE((ki == bi && kj == bj) || (ki == bj && kj == bi));
    }
  }
}

TEST(StructuralFeatures, AddingCommonNeighbourNeverDecreasesCnAaRa) {
  Rng rng = make_rng(23, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 6 + uniform_index(rng, 8);
    auto edges = oracle::random_graph(n, 0.3, rng);
    edges.erase(std::remove_if(edges.begin(), edges.end(),
                               [](auto e) { return e == std::pair<NodeId, NodeId>{0, 1}; }),
                edges.end());
    edges.insert(edges.begin(), {0, 1});
    // find z not already adjacent to both
    const auto a = oracle::adjacency(n, edges);
    NodeId z = 2;
    while (z < n && a[0][z] && a[1][z]) ++z;
    if (z == n) continue;
    const auto before = structural(oracle::to_network(n, edges));
    auto more = edges;
    if (!a[0][z]) more.emplace_back(0, z);
    if (!a[1][z]) more.emplace_back(1, z);
    const auto after = structural(oracle::to_network(n, more));
    for (const char* name : {"CN", "AA", "RA"}) {
      EXPECT_GE(after.values(0, col(after, name)), before.values(0, col(before, name))) << name;
    }
  }
}

TEST(StateFeatures, EqualHalfStates) {
  const auto net = oracle::to_network(2, {{0, 1}});
  const std::vector<double> x = {0.5, 0.5};
  const auto fm = steady_state_edge_features(net, x);
  ASSERT_EQ(fm.cols(), 7u);
  const std::vector<double> expect = {0.5, 0.5, 1.0, 0.0, 0.25, 0.5 / (0.5 + kEpsilon), 0.5 / (0.5 + kEpsilon)};
  for (std::size_t c = 0; c < 7; ++c) EXPECT_DOUBLE_EQ(fm.values(0, c), expect[c]);
  EXPECT_NEAR(fm.values(0, 5), 1.0, 1e-7);
}

TEST(StateFeatures, ZeroStateRatioIsFinite) {
  const auto net = oracle::to_network(2, {{0, 1}});
  const std::vector<double> x = {0.3, 0.0};
  const auto fm = steady_state_edge_features(net, x);
  EXPECT_TRUE(std::isfinite(fm.values(0, col(fm, "x_ratio_ij"))));
  EXPECT_DOUBLE_EQ(fm.values(0, col(fm, "x_ratio_ij")), 0.3 / kEpsilon);
}

TEST(StateFeatures, EndpointSwapPermutesColumns) {
  const auto net = oracle::to_network(2, {{0, 1}});
  const std::vector<double> x = {0.2, 0.7}, y = {0.7, 0.2};
  const auto a = steady_state_edge_features(net, x);
  const auto b = steady_state_edge_features(net, y);
  EXPECT_EQ(a.values(0, 0), b.values(0, 1));
  EXPECT_EQ(a.values(0, 1), b.values(0, 0));
  EXPECT_EQ(a.values(0, 2), b.values(0, 2));
  EXPECT_EQ(a.values(0, 3), b.values(0, 3));
  EXPECT_EQ(a.values(0, 4), b.values(0, 4));
  EXPECT_EQ(a.values(0, 5), b.values(0, 6));
  EXPECT_EQ(a.values(0, 6), b.values(0, 5));
}

TEST(Normalize, ThreeValueColumn) {
  FeatureMatrix fm({"a"}, 3);
  fm.values(0, 0) = 0;
  fm.values(1, 0) = 5;
  fm.values(2, 0) = 10;
  const auto out = normalize(fm);
  EXPECT_NEAR(out.values(0, 0), -1.2247, 1e-3);
  EXPECT_NEAR(out.values(1, 0), 0.0, 1e-12);
  EXPECT_NEAR(out.values(2, 0), 1.2247, 1e-3);
  EXPECT_FALSE(out.stats[0].degenerate);
  EXPECT_EQ(out.stats[0].min, 0.0);
  EXPECT_EQ(out.stats[0].max, 10.0);
}

TEST(Normalize, ConstantColumnIsZeroAndFlagged) {
  FeatureMatrix fm({"a", "b"}, 4);
  for (std::size_t r = 0; r < 4; ++r) {
    fm.values(r, 0) = 3.0;
    fm.values(r, 1) = static_cast<double>(r);
  }
  const auto out = normalize(fm);
  EXPECT_TRUE(out.stats[0].degenerate);
  EXPECT_FALSE(out.stats[1].degenerate);
  for (std::size_t r = 0; r < 4; ++r) EXPECT_EQ(out.values(r, 0), 0.0);
}

TEST(Normalize, MeanZeroStdOne) {
  Rng rng = make_rng(24, 0);
  FeatureMatrix fm({"a", "b", "c"}, 57);
  for (double& v : fm.values.values()) v = std::exp(6.0 * uniform01(rng));
  const auto out = normalize(fm);
  for (std::size_t c = 0; c < 3; ++c) {
    double mean = 0, sq = 0;
    for (std::size_t r = 0; r < 57; ++r) mean += out.values(r, c);
    mean /= 57;
    for (std::size_t r = 0; r < 57; ++r) sq += (out.values(r, c) - mean) * (out.values(r, c) - mean);
    EXPECT_NEAR(mean, 0.0, 1e-9);
    EXPECT_NEAR(std::sqrt(sq / 57), 1.0, 1e-9);
  }
}

TEST(Normalize, NeedsTwoRows) {
  FeatureMatrix fm({"a"}, 1);
  EXPECT_THROW(normalize(fm), Error);
}

TEST(FeatureMatrix, RejectsDuplicateNames) {
  EXPECT_THROW(FeatureMatrix({"a", "a"}, 2), Error);
}

TEST(FeatureSubset, ColumnCounts) {
  const auto net = oracle::to_network(4, {{0, 1}, {1, 2}, {2, 3}, {0, 2}});
  const std::vector<double> x = {0.1, 0.4, 0.3, 0.9};
  const auto all = raw_edge_features(compute_feature_tables(net, x));
  const auto both = feature_subset(all, FeatureMode::Both);
  const auto st = feature_subset(all, FeatureMode::StateOnly);
  const auto sr = feature_subset(all, FeatureMode::StructOnly);
  EXPECT_EQ(both.cols(), 25u);
  EXPECT_EQ(st.cols(), 7u);
  EXPECT_EQ(sr.cols(), 18u);
  std::set<std::string> uni(st.columns.begin(), st.columns.end());
  uni.insert(sr.columns.begin(), sr.columns.end());
  EXPECT_EQ(uni, std::set<std::string>(both.columns.begin(), both.columns.end()));
  EXPECT_EQ(st.columns, state_columns());
}
