#include <gtest/gtest.h>

#include <cmath>

#include "netchron/dynamics.hpp"
#include "oracles.hpp"

using namespace netchron;

namespace {

oracle::EdgeList complete(std::size_t n) {
  oracle::EdgeList out;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j) out.emplace_back(i, j);
  return out;
}

// Symmetric SIS fixed point on a k-regular graph: bisection on the scalar map.
double sis_regular_fixed_point(double beta, double delta, int k) {
  auto g = [&](double p) {
    return (1 - delta) * p + (1 - p) * (1 - std::pow(1 - beta * p, k)) - p;
  };
  double lo = 1e-6, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(Sis, CompleteGraphMatchesScalarFixedPoint) {
  const auto net = oracle::to_network(5, complete(5));
  DynamicsSpec spec;
  spec.tol = 1e-13;
  spec.max_steps = 100000;
  spec.seed = 3;
  const auto st = simulate(net, spec);
  ASSERT_TRUE(st.converged);
  const double p = sis_regular_fixed_point(0.4, 0.3, 4);
  EXPECT_NEAR(p, 0.7109029233997592, 1e-9);
  for (double v : st.values) EXPECT_NEAR(v, p, 1e-9);
}

TEST(Sis, StatesStayInUnitInterval) {
  Rng rng = make_rng(31, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 30);
    const auto net = oracle::to_network(n, oracle::random_graph(n, 0.3, rng));
    DynamicsSpec spec;
    spec.beta = uniform01(rng);
    spec.delta = uniform01(rng);
    std::vector<double> x(n);
    for (auto& v : x) v = uniform01(rng);
    for (int step = 0; step < 50; ++step) {
      x = apply_update(net, spec, x);
      for (double v : x) {
        ASSERT_GE(v, 0.0);
        ASSERT_LE(v, 1.0);
      }
    }
  }
}

TEST(Simulate, ConvergedStateIsNearFixedPoint) {
  Rng rng = make_rng(32, 0);
  for (auto kind : {DynamicsKind::SIS, DynamicsKind::Gene}) {
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t n = 3 + uniform_index(rng, 20);
      const auto net = oracle::to_network(n, oracle::random_graph(n, 0.3, rng));
      auto spec = sample_dynamics_params(kind, n, trial);
      spec.max_steps = 20000;
      const auto st = simulate(net, spec);
      if (!st.converged) continue;
      const auto next = apply_update(net, spec, st.values);
      EXPECT_LT(l2_distance(next, st.values), spec.tol);
      EXPECT_LT(st.residual, spec.tol);
    }
  }
}

TEST(Opinion, ConsensusIsFixed) {
  Rng rng = make_rng(33, 0);
  const auto net = oracle::to_network(12, oracle::random_graph(12, 0.4, rng));
  const auto spec = sample_dynamics_params(DynamicsKind::Opinion, 12, 5);
  const std::vector<double> x(12, 0.37);
  const auto next = apply_update(net, spec, x);
  for (double v : next) EXPECT_DOUBLE_EQ(v, 0.37);
  const auto st = simulate(net, spec, x);
  EXPECT_TRUE(st.converged);
  EXPECT_EQ(st.steps, 1u);
}

TEST(Opinion, DivergentOscillationRaisesBlowup) {
  const auto net = oracle::to_network(2, {{0, 1}});
  DynamicsSpec spec;
  spec.kind = DynamicsKind::Opinion;
  spec.theta = {4.0, 4.0};
  spec.max_steps = 100000;
  try {
    simulate(net, spec, std::vector<double>{0.0, 1.0});
    FAIL() << "expected NumericalBlowup";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NumericalBlowup);
    EXPECT_EQ(e.exit_code(), 4);
  }
}

TEST(Gene, IsolatedNodeSettlesAtBasalLevel) {
  const auto net = oracle::to_network(3, {{0, 1}});
  auto spec = sample_dynamics_params(DynamicsKind::Gene, 3, 9);
  const auto x = apply_update(net, spec, std::vector<double>{0.9, 0.2, 0.7});
  EXPECT_DOUBLE_EQ(x[2], spec.b1[2]);
  // one neighbour with state 0.9: b1 + b2 * 0.81 / 1.81
  EXPECT_DOUBLE_EQ(x[1], spec.b1[1] + spec.b2[1] * 0.81 / 1.81);
}

TEST(SampleParams, DeterministicAndInRange) {
  const auto a = sample_dynamics_params(DynamicsKind::Gene, 10000, 77);
  const auto b = sample_dynamics_params(DynamicsKind::Gene, 10000, 77);
  EXPECT_EQ(a.b1, b.b1);
  EXPECT_EQ(a.b2, b.b2);
  double mean = 0;
  for (std::size_t i = 0; i < 10000; ++i) {
    EXPECT_GE(a.b1[i], 0.0);
    EXPECT_LT(a.b1[i], 1.0);
    EXPECT_GE(a.b2[i], 0.5);
    EXPECT_LT(a.b2[i], 1.5);
    mean += a.b2[i];
  }
  EXPECT_NEAR(mean / 10000, 1.0, 0.02);

  const auto o = sample_dynamics_params(DynamicsKind::Opinion, 10000, 78);
  std::size_t low = 0;
  for (double t : o.theta) {
    const bool in_low = t >= 1.0 && t <= 1.5;
    const bool in_high = t >= 3.5 && t <= 4.0;
    EXPECT_TRUE(in_low || in_high) << t;
    low += in_low;
  }
  EXPECT_NEAR(static_cast<double>(low) / 10000, 0.5, 0.03);
}

TEST(Spec, RejectsBadParameters) {
  const auto net = oracle::to_network(3, {{0, 1}, {1, 2}});
  DynamicsSpec spec;
  spec.beta = 1.5;
  EXPECT_THROW(simulate(net, spec), Error);
  spec = DynamicsSpec{};
  spec.kind = DynamicsKind::Gene;
  EXPECT_THROW(simulate(net, spec), Error);
  spec = sample_dynamics_params(DynamicsKind::Gene, 3, 1);
  spec.hill_n = 1.0;
  EXPECT_THROW(simulate(net, spec), Error);
  spec = DynamicsSpec{};
  spec.tol = 0.0;
  EXPECT_THROW(simulate(net, spec), Error);
  EXPECT_FALSE(parse_dynamics_kind("voter"));
  EXPECT_EQ(parse_dynamics_kind("gene"), DynamicsKind::Gene);
}

TEST(Relax, StartingAtTargetStaysThere) {
  const auto net = oracle::to_network(4, {{0, 1}, {1, 2}, {2, 3}});
  DynamicsSpec spec;
  const auto st = simulate(net, spec);
  std::vector<PathStage> path = {{net, 0.7}, {net, 2.0}};
  std::vector<SteadyState> targets = {st, st};
  const auto out = relax_along_path(path, targets, st.values);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(out[i], st.values[i]);
}

TEST(Relax, LongStageReachesTarget) {
  const auto net = oracle::to_network(4, {{0, 1}, {1, 2}, {2, 3}});
  SteadyState target;
  target.values = {0.1, 0.2, 0.3, 0.4};
  std::vector<PathStage> path = {{net, 50.0}};
  std::vector<SteadyState> targets = {target};
  const auto out = relax_along_path(path, targets, {1.0, 1.0, 1.0, 1.0});
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(out[i], target.values[i], 1e-12);
}

TEST(Relax, DistanceToTargetShrinksMonotonically) {
  const auto net = oracle::to_network(3, {{0, 1}, {1, 2}});
  SteadyState target;
  target.values = {0.5, -0.2, 0.9};
  std::vector<PathStage> path(10, PathStage{net, 0.3});
  std::vector<SteadyState> targets(10, target);
  const auto traj = relax_trajectory(path, targets, {2.0, 2.0, 2.0});
  double prev = l2_distance(std::vector<double>{2.0, 2.0, 2.0}, target.values);
  for (const auto& s : traj) {
    const double d = l2_distance(s, target.values);
    EXPECT_LT(d, prev);
    EXPECT_NEAR(d, prev * std::exp(-0.3), 1e-12);
    prev = d;
  }
}

TEST(Relax, MismatchedLengthsRaise) {
  const auto net = oracle::to_network(2, {{0, 1}});
  std::vector<PathStage> path = {{net, 1.0}, {net, 1.0}};
  std::vector<SteadyState> targets(1);
  targets[0].values = {0.0, 0.0};
  try {
    relax_along_path(path, targets, {0.0, 0.0});
    FAIL() << "expected StageMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::StageMismatch);
  }
}

TEST(PathDependence, OppositeOrdersEndApart) {
  for (std::size_t n : {4u, 6u}) {
    DynamicsSpec spec;
    spec.seed = 1;
    const auto r = path_dependence_demo(n, spec);
    EXPECT_GT(r.final_distance, 1e-6) << n;
    EXPECT_EQ(r.trajectory_a.size(), 3u);
    EXPECT_EQ(r.trajectory_a.front(), r.trajectory_b.front());
  }
}

TEST(PathDependence, IdenticalOrdersCoincide) {
  DynamicsSpec spec;
  const auto r = path_dependence_demo(6, spec, true);
  EXPECT_EQ(r.final_distance, 0.0);
  EXPECT_THROW(path_dependence_demo(3, spec), Error);
}
