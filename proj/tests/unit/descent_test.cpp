// Copyright 2026 The neural_drawer Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "neural_drawer/descent.hpp"

#include <gtest/gtest.h>

#include "neural_drawer/errors.hpp"
#include "oracles.hpp"

namespace nd {
namespace {

AestheteModel flat_model() {
  AestheteModel m(1);
  m.parameters()[4].value.fill(0.0);
  m.parameters()[5].value.fill(-3.0);
  return m;
}

TEST(InitTest, SeededUnitSquare) {
  const Layout a = init_layout(50, 4), b = init_layout(50, 4), c = init_layout(50, 5);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  for (double v : a.values()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

// Some random starts on C4 settle in a self-crossing quadrilateral that is
// stationary for plain gradient descent.
TEST(DescentTest, CycleFourCanStallInCrossedLayout) {
  const Graph g = cycle_graph(4);
  const DistanceMatrix d = bfs_all_pairs(g);
  DescentConfig cfg;
  cfg.learning_rate = 0.05;
  cfg.seed = 1;
  const DescentResult r = optimize_layout(g, LayoutLoss::Stress, cfg, {&d, nullptr});
  EXPECT_EQ(count_crossings(r.layout, g), 1);
  EXPECT_GT(stress_value(r.layout, d), 2.0 * oracle::best_polygon_stress(4));
  EXPECT_NEAR(r.trace.back(), r.trace[r.trace.size() - 100], 1e-9);
}

TEST(DescentTest, CycleFourReachesSquare) {
  const Graph g = cycle_graph(4);
  const DistanceMatrix d = bfs_all_pairs(g);
  DescentConfig cfg;
  cfg.steps = 500;
  cfg.learning_rate = 0.05;
  cfg.seed = 0;
  const DescentResult r = optimize_layout(g, LayoutLoss::Stress, cfg, {&d, nullptr});
  const double best = oracle::best_polygon_stress(4);
  EXPECT_LE(stress_value(r.layout, d), 1.10 * best + 1e-12);
  EXPECT_EQ(r.trace.size(), 500u);
}

TEST(DescentTest, ZeroStepsReturnsStart) {
  const Graph g = cycle_graph(6);
  const DistanceMatrix d = bfs_all_pairs(g);
  DescentConfig cfg;
  cfg.steps = 0;
  cfg.seed = 9;
  const DescentResult r = optimize_layout(g, LayoutLoss::Stress, cfg, {&d, nullptr});
  EXPECT_EQ(r.layout, init_layout(g, 9));
  EXPECT_TRUE(r.trace.empty());
}

TEST(DescentTest, SmallStepTraceIsMonotone) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph g = generate_er_sparse(20, 0.2, seed);
    const DistanceMatrix d = bfs_all_pairs(g);
    DescentConfig cfg;
    cfg.steps = 300;
    cfg.learning_rate = 0.01;
    cfg.seed = seed;
    const DescentResult r = optimize_layout(g, LayoutLoss::Stress, cfg, {&d, nullptr});
    double best = r.trace.front();
    for (std::size_t i = 1; i < r.trace.size(); ++i) {
      EXPECT_LE(r.trace[i], r.trace[i - 1] + 1e-12) << "seed " << seed << " step " << i;
      best = std::min(best, r.trace[i]);
    }
    EXPECT_LE(stress_value(r.layout, d), r.trace.front());
  }
}

TEST(DescentTest, AdamAndDecayAlsoDescend) {
  const Graph g = generate_er_sparse(25, 0.15, 3);
  const DistanceMatrix d = bfs_all_pairs(g);
  DescentConfig cfg;
  cfg.steps = 400;
  cfg.learning_rate = 0.02;
  cfg.optimizer = Optimizer::Adam;
  cfg.decay = 0.999;
  const DescentResult r = optimize_layout(g, LayoutLoss::Stress, cfg, {&d, nullptr});
  EXPECT_LT(stress_value(r.layout, d), 0.5 * r.trace.front());
}

TEST(DescentTest, Deterministic) {
  const Graph g = generate_er_component(20, 40, 0.01, 2);
  const DistanceMatrix d = bfs_all_pairs(g);
  const AestheteModel m(3);
  DescentConfig cfg;
  cfg.steps = 50;
  cfg.seed = 4;
  const DescentResult a = optimize_layout(g, LayoutLoss::Combined, cfg, {&d, &m});
  const DescentResult b = optimize_layout(g, LayoutLoss::Combined, cfg, {&d, &m});
  EXPECT_EQ(a.layout, b.layout);
  EXPECT_EQ(a.trace, b.trace);
}

TEST(DescentTest, ZeroLambdaReproducesStressBitExactly) {
  const Graph g = generate_er_component(20, 40, 0.01, 6);
  const DistanceMatrix d = bfs_all_pairs(g);
  const AestheteModel m(3);
  DescentConfig cfg;
  cfg.steps = 200;
  cfg.lambda = 0.0;
  cfg.seed = 12;
  const DescentResult s = optimize_layout(g, LayoutLoss::Stress, cfg, {&d, nullptr});
  const DescentResult c = optimize_layout(g, LayoutLoss::Combined, cfg, {&d, &m});
  EXPECT_EQ(s.layout, c.layout);
  EXPECT_EQ(s.trace, c.trace);
}

TEST(AlternatingTest, FlatAestheteIsHalfRateStress) {
  const Graph g = generate_er_sparse(15, 0.3, 4);
  const DistanceMatrix d = bfs_all_pairs(g);
  const AestheteModel m = flat_model();
  DescentConfig cfg;
  cfg.seed = 3;
  for (int steps : {1, 2, 7, 40}) {
    cfg.steps = steps;
    const DescentResult alt = alternating_optimize(g, cfg, {&d, &m});
    cfg.steps = (steps + 1) / 2;
    const DescentResult pure = optimize_layout(g, LayoutLoss::Stress, cfg, {&d, nullptr});
    EXPECT_EQ(alt.layout, pure.layout) << steps;
  }
}

TEST(AlternatingTest, FirstStepIsStressSecondIsAesthete) {
  const Graph g = cycle_graph(6);
  const DistanceMatrix d = bfs_all_pairs(g);
  const AestheteModel m(5);
  DescentConfig cfg;
  cfg.seed = 1;
  cfg.steps = 1;
  const DescentResult one = alternating_optimize(g, cfg, {&d, &m});
  const DescentResult stress_only = optimize_layout(g, LayoutLoss::Stress, cfg, {&d, nullptr});
  EXPECT_EQ(one.layout, stress_only.layout);
  cfg.steps = 2;
  const DescentResult two = alternating_optimize(g, cfg, {&d, &m});
  EXPECT_NE(two.layout, one.layout);
}

TEST(DescentTest, DivergenceCarriesTrace) {
  const Graph g = cycle_graph(5);
  const DistanceMatrix d = bfs_all_pairs(g);
  DescentConfig cfg;
  cfg.steps = 10;
  cfg.learning_rate = 1e300;
  try {
    optimize_layout(g, LayoutLoss::Stress, cfg, {&d, nullptr});
    FAIL() << "expected DivergenceError";
  } catch (const DivergenceError& e) {
    EXPECT_FALSE(e.trace().empty());
    EXPECT_NE(std::string(e.what()).find("step"), std::string::npos);
  }
}

TEST(DescentTest, MissingInputsAndBadConfig) {
  const Graph g = cycle_graph(5);
  DescentConfig cfg;
  EXPECT_THROW(optimize_layout(g, LayoutLoss::Stress, cfg, {}), std::invalid_argument);
  EXPECT_THROW(optimize_layout(g, LayoutLoss::Aesthete, cfg, {}), std::invalid_argument);
  cfg.learning_rate = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.learning_rate = 0.1;
  cfg.pair_batch = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(KamadaKawaiTest, CycleTargetIsRegularAndDeterministic) {
  const Graph g = cycle_graph(6);
  const Layout a = kamada_kawai_target(g), b = kamada_kawai_target(g);
  EXPECT_EQ(a, b);
  EXPECT_EQ(count_crossings(a, g), 0);
  const DistanceMatrix d = bfs_all_pairs(g);
  EXPECT_LT(stress_value(a, d, {2, true}), stress_value(circular_layout(6, 1.0), d, {2, true}));
}

}  // namespace
}  // namespace nd
