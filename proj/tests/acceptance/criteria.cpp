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


#include "criteria.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <set>

#include "gradcheck_suite.hpp"
#include "neural_drawer/aesthete.hpp"
#include "neural_drawer/descent.hpp"
#include "neural_drawer/geometry.hpp"
#include "neural_drawer/gnd.hpp"
#include "neural_drawer/graph.hpp"
#include "neural_drawer/losses.hpp"
#include "neural_drawer/rng.hpp"
#include "neural_drawer/spectral.hpp"
#include "neural_drawer/training.hpp"
#include "oracles.hpp"

namespace nd::acceptance {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
  Matrix m(r, c);
  for (double& v : m.values()) v = rng.uniform(-1, 1);
  return m;
}

// ---- property group ----

Verdict gradient_suite() {
  const auto cases = run_gradcheck_suite(1);
  double worst = 0.0;
  std::string worst_name;
  int failures = 0;
  for (const auto& c : cases) {
    if (!c.passed) ++failures;
    if (c.relative_error >= worst) {
      worst = c.relative_error;
      worst_name = c.name;
    }
  }
  return {"C7a", "finite-difference gradients", failures == 0 && worst <= 1e-4,
          format("%zu cases, %d failed, worst %.2e (%s), bound 1e-4", cases.size(), failures, worst,
                 worst_name.c_str())};
}

Verdict procrustes_invariance() {
  Rng rng(21);
  double worst = 0.0;
  const int trials = 2000;
  for (int t = 0; t < trials; ++t) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(3, 40));
    const Layout p = random_matrix(n, 2, rng);
    const double angle = rng.uniform(0, 2 * std::numbers::pi);
    const double scale = std::exp(rng.uniform(std::log(0.01), std::log(100.0)));
    const double tx = rng.uniform(-50, 50), ty = rng.uniform(-50, 50);
    const double c = std::cos(angle), s = std::sin(angle);
    Layout q(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
      q(i, 0) = scale * (c * p(i, 0) - s * p(i, 1)) + tx;
      q(i, 1) = scale * (s * p(i, 0) + c * p(i, 1)) + ty;
    }
    worst = std::max({worst, procrustes_value(p, q), procrustes_value(q, p)});
  }
  return {"C7b", "Procrustes rotation/scale/translation invariance", worst <= 1e-10,
          format("%d random similarity transforms, worst %.2e, bound 1e-10", trials, worst)};
}

// Mixes general-position pairs with grid pairs that share endpoints, touch
// or overlap collinearly, where a threshold-based test would slip.
ArcPair random_segment_pair(Rng& rng, int kind) {
  ArcPair a{};
  if (kind < 6) {
    for (double& v : a) v = rng.uniform();
    return a;
  }
  auto grid = [&] { return static_cast<double>(rng.uniform_int(0, 8)) / 8.0; };
  for (double& v : a) v = grid();
  switch (kind) {
    case 6:  // shared endpoint
      a[4] = a[2];
      a[5] = a[3];
      break;
    case 7: {  // both segments on one line
      const double dx = grid() - 0.5, dy = grid() - 0.5;
      const double t[4] = {grid() * 4, grid() * 4, grid() * 4, grid() * 4};
      for (int k = 0; k < 4; ++k) {
        a[2 * k] = a[0] + t[k] * dx;
        a[2 * k + 1] = a[1] + t[k] * dy;
      }
      break;
    }
    case 8: {  // an endpoint at the midpoint of the other segment
      a[4] = 0.5 * (a[0] + a[2]);
      a[5] = 0.5 * (a[1] + a[3]);
      break;
    }
    default:
      break;
  }
  return a;
}

Verdict segment_oracle() {
  Rng rng(33);
  const int pairs = 100000;
  int disagreements = 0, crossing = 0;
  for (int i = 0; i < pairs; ++i) {
    const ArcPair a = random_segment_pair(rng, static_cast<int>(rng.uniform_int(0, 9)));
    const bool fast = segments_intersect(a);
    crossing += fast;
    if (fast != oracle::sampled_intersect(a)) ++disagreements;
  }
  return {"C7c", "segment intersection vs sampling oracle", disagreements == 0,
          format("%d pairs (%d intersecting), %d disagreements", pairs, crossing, disagreements)};
}

Verdict eigensolver_residual() {
  Rng rng(44);
  double worst = 0.0;
  int matrices = 0;
  auto check = [&](const Matrix& m) {
    const EigenDecomposition e = eigendecompose(m);
    const std::size_t n = m.rows();
    double scale = 0.0;
    for (double v : m.values()) scale = std::max(scale, std::abs(v));
    Matrix mv = matmul(m, e.eigenvectors);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) mv(i, j) -= e.eigenvectors(i, j) * e.eigenvalues[j];
    worst = std::max(worst, max_abs(mv) / std::max(scale, 1e-300));
    ++matrices;
  };
  for (int t = 0; t < 150; ++t) {
    const int n = static_cast<int>(rng.uniform_int(3, 80));
    check(normalized_laplacian(generate_er_sparse(n, rng.uniform(0.05, 0.5), rng.next())));
  }
  for (int t = 0; t < 50; ++t) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(2, 40));
    Matrix m = random_matrix(n, n, rng);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) m(i, j) = m(j, i);
    check(m);
  }
  return {"C7d", "eigensolver residual", worst <= 1e-8,
          format("%d symmetric matrices, worst relative residual %.2e, bound 1e-8", matrices, worst)};
}

Verdict forward_equivariance() {
  double worst = 0.0;
  int checks = 0;
  for (Aggregator kind : {Aggregator::GCN, Aggregator::GAT, Aggregator::GIN, Aggregator::MLP}) {
    GndSpec spec;
    spec.kind = kind;
    spec.input_dim = 5;
    spec.hidden = 12;
    spec.layers = 3;
    const GndModel model(spec, 100 + static_cast<int>(kind));
    Rng rng(55 + static_cast<int>(kind));
    for (int t = 0; t < 10; ++t) {
      const Graph g = generate_er_sparse(static_cast<int>(rng.uniform_int(6, 60)), 0.15, rng.next());
      const auto n = static_cast<std::size_t>(g.node_count());
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      rng.shuffle(std::span<int>(perm));
      const Matrix x = random_matrix(n, 5, rng);
      Matrix xp(n, 5);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < 5; ++c) xp(static_cast<std::size_t>(perm[i]), c) = x(i, c);
      const Layout a = model.predict(make_context(g), x);
      const Layout b = model.predict(make_context(g.relabeled(perm)), xp);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < 2; ++c)
          worst = std::max(worst, std::abs(b(static_cast<std::size_t>(perm[i]), c) - a(i, c)) /
                                      (1.0 + std::abs(a(i, c))));
      ++checks;
    }
  }
  return {"C7e", "permutation equivariance of the drawer forward pass", worst <= 1e-10,
          format("%d graph/model pairs over gcn, gat, gin, mlp; worst deviation %.2e", checks, worst)};
}

Verdict bfs_exhaustive() {
  int graphs = 0, mismatches = 0;
  for (int n = 1; n <= 64; ++n) {
    for (double p : {0.02, 0.08, 0.3, 0.9}) {
      Rng rng(static_cast<std::uint64_t>(n) * 131 + static_cast<std::uint64_t>(p * 1000));
      const Graph g = largest_component(sample_gnp(n, p, rng)).graph;
      const DistanceMatrix d = bfs_all_pairs(g);
      const std::vector<int> fw = oracle::floyd_warshall(g);
      if (!std::equal(fw.begin(), fw.end(), d.values().begin(), d.values().end())) ++mismatches;
      ++graphs;
    }
  }
  return {"C7f", "BFS distances vs Floyd-Warshall for n <= 64", mismatches == 0,
          format("%d connected graphs, %d mismatching distance matrices", graphs, mismatches)};
}

// Judged at the default seed. Descent from other random starts on C4 can
// settle in a self-crossing local minimum, so the hit rate over ten seeds is
// reported alongside.
Verdict cycle_stress() {
  std::string detail;
  bool ok = true;
  for (int n : {4, 5, 6}) {
    const Graph g = cycle_graph(n);
    const DistanceMatrix d = bfs_all_pairs(g);
    const double best = oracle::best_polygon_stress(n);
    double at_default = 0.0;
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      DescentConfig cfg;
      cfg.learning_rate = 0.05;
      cfg.seed = seed;
      const double v = stress_value(optimize_layout(g, LayoutLoss::Stress, cfg, {&d, nullptr}).layout, d);
      if (seed == 0) at_default = v;
      hits += v <= 1.10 * best;
    }
    ok = ok && at_default <= 1.10 * best;
    detail += format("%sC%d %.5f vs polygon %.5f (%d/10 seeds within 10%%)", detail.empty() ? "" : "; ", n,
                     at_default, best, hits);
  }
  return {"C3", "stress descent on cycles within 10% of the best regular polygon", ok,
          detail + "; seed 0, 2000 steps, lr 0.05"};
}

// ---- training group ----

struct AestheteOutcome {
  AestheteModel model;
  Verdict verdict;
};

AestheteOutcome aesthete_accuracy_check() {
  const AestheteTrainConfig cfg;
  const auto start = Clock::now();
  const auto train_set = build_crossing_dataset(100000, derive_seed(cfg.seed, 1));
  const auto test_set = build_crossing_dataset(50000, derive_seed(cfg.seed, 2));
  AestheteModel model = train_aesthete(train_set, cfg);
  const double accuracy = aesthete_accuracy(model, test_set);
  const double elapsed = seconds_since(start);
  return {std::move(model),
          {"C1", "aesthete test accuracy", accuracy >= 0.95 && elapsed < 600.0,
           format("accuracy %.4f (bound 0.95) on 50000 held-out pairs, %.0f s (bound 600 s)", accuracy, elapsed)}};
}

struct CrossingRuns {
  int zero = 0;
  int reduced = 0;
  std::string counts;
};

CrossingRuns crossing_runs(const AestheteModel& aesthete, bool normalize_pairs, int runs) {
  CrossingRuns out;
  for (int i = 0; i < runs; ++i) {
    const auto seed = static_cast<std::uint64_t>(i + 1);
    const Graph g = generate_er_component(20, 40, 0.01, seed);
    const DistanceMatrix d = bfs_all_pairs(g);
    DescentConfig cfg;
    cfg.steps = 2000;
    cfg.pair_batch = 10;
    cfg.seed = seed;
    cfg.normalize_pairs = normalize_pairs;
    const int before = count_crossings(init_layout(g, seed), g);
    const DescentResult r = optimize_layout(g, LayoutLoss::Aesthete, cfg, {&d, &aesthete});
    const int after = count_crossings(r.layout, g);
    out.zero += after == 0;
    out.reduced += after < before;
    out.counts += format("%s%d->%d", out.counts.empty() ? "" : " ", before, after);
  }
  return out;
}

// Judged with the default descent configuration. The raw-coordinate variant
// feeds unnormalized pairs to the aesthete and is reported for comparison.
Verdict crossing_elimination(const AestheteModel& aesthete) {
  const int runs = 20;
  const CrossingRuns normalized = crossing_runs(aesthete, true, runs);
  const CrossingRuns raw = crossing_runs(aesthete, false, runs);
  const bool ok = normalized.zero * 5 >= runs * 4 && normalized.reduced == runs;
  return {"C2", "crossing elimination by aesthete descent", ok,
          format("%d/%d reach zero (bound 80%%), %d/%d strictly reduced (bound 100%%); crossings %s | raw "
                 "coordinates: %d/%d zero, %d/%d reduced",
                 normalized.zero, runs, normalized.reduced, runs, normalized.counts.c_str(), raw.zero, runs,
                 raw.reduced, runs)};
}

// The 1000-graph dataset prepared once per (task, feature mode).
class DrawerBench {
 public:
  DrawerBench() : dataset_(build_sparse_dataset(1000, 7)) {}

  struct Scores {
    double procrustes = 0.0;
    double stress = 0.0;
  };

  Scores run(Aggregator kind, TaskKind task, FeatureMode features, std::uint64_t seed) {
    TrainRunConfig cfg;
    cfg.model.kind = kind;
    cfg.model.features = features;
    cfg.task = task;
    cfg.seed = seed;
    const Prepared& p = prepared(cfg);
    const TrainResult r = train(p.train.samples, p.val.samples, cfg);
    Scores s;
    if (task == TaskKind::Supervised) s.procrustes = evaluate(r.model, p.test.samples, Metric::Procrustes, seed).mean;
    s.stress = evaluate(r.model, p.test.samples, Metric::AveragedStress, seed).mean;
    return s;
  }

 private:
  struct Prepared {
    PreparedSamples train, val, test;
  };

  const Prepared& prepared(const TrainRunConfig& cfg) {
    const auto key = std::make_pair(static_cast<int>(cfg.task), static_cast<int>(cfg.model.features));
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      const auto tr = dataset_.indices(Split::Train);
      const auto va = dataset_.indices(Split::Validation);
      const auto te = dataset_.indices(Split::Test);
      it = cache_.emplace(key, Prepared{prepare_samples(dataset_, tr, cfg), prepare_samples(dataset_, va, cfg),
                                        prepare_samples(dataset_, te, cfg)})
               .first;
    }
    return it->second;
  }

  GraphDataset dataset_;
  std::map<std::pair<int, int>, Prepared> cache_;
};

struct SeedScores {
  std::map<std::string, double> procrustes;
  std::map<std::string, double> stress;
};

void drawer_criteria(const Report& report) {
  DrawerBench bench;
  const std::vector<std::uint64_t> seeds{1, 2, 3};
  std::vector<SeedScores> all;
  const auto start = Clock::now();
  for (std::uint64_t seed : seeds) {
    SeedScores s;
    for (Aggregator k : {Aggregator::GAT, Aggregator::GCN, Aggregator::GIN}) {
      const std::string name(aggregator_name(k));
      s.procrustes[name] = bench.run(k, TaskKind::Supervised, FeatureMode::LaplacianPE, seed).procrustes;
      s.procrustes["r" + name] = bench.run(k, TaskKind::Supervised, FeatureMode::RandomUniform, seed).procrustes;
    }
    for (Aggregator k : {Aggregator::GAT, Aggregator::GCN, Aggregator::GIN, Aggregator::MLP}) {
      s.stress[std::string(aggregator_name(k))] = bench.run(k, TaskKind::Stress, FeatureMode::LaplacianPE, seed).stress;
    }
    std::printf("  seed %llu procrustes gat %.4f gcn %.4f gin %.4f rgat %.4f rgcn %.4f rgin %.4f | stress gat %.4f "
                "gcn %.4f gin %.4f mlp %.4f (%.0f s elapsed)\n",
                static_cast<unsigned long long>(seed), s.procrustes["gat"], s.procrustes["gcn"], s.procrustes["gin"],
                s.procrustes["rgat"], s.procrustes["rgcn"], s.procrustes["rgin"], s.stress["gat"], s.stress["gcn"],
                s.stress["gin"], s.stress["mlp"], seconds_since(start));
    std::fflush(stdout);
    all.push_back(std::move(s));
  }

  const SeedScores& ref = all.front();
  report({"C4", "supervised spectral imitation, GAT test Procrustes", ref.procrustes.at("gat") <= 0.10,
          format("seed 1: %.4f (bound 0.10); seeds 2, 3: %.4f, %.4f", ref.procrustes.at("gat"),
                 all[1].procrustes.at("gat"), all[2].procrustes.at("gat"))});

  struct Ordering {
    std::string label;
    bool supervised;
    std::string lower, higher;
  };
  const std::vector<Ordering> orderings{
      {"procrustes gat < gcn", true, "gat", "gcn"},    {"procrustes gat < gin", true, "gat", "gin"},
      {"procrustes gat < rgat", true, "gat", "rgat"},  {"procrustes gcn < rgcn", true, "gcn", "rgcn"},
      {"procrustes gin < rgin", true, "gin", "rgin"},  {"stress gat < mlp", false, "gat", "mlp"},
      {"stress gcn < mlp", false, "gcn", "mlp"},       {"stress gin < mlp", false, "gin", "mlp"},
  };
  bool all_hold = true;
  std::string broken;
  for (const auto& o : orderings) {
    for (std::size_t i = 0; i < all.size(); ++i) {
      const auto& m = o.supervised ? all[i].procrustes : all[i].stress;
      if (!(m.at(o.lower) < m.at(o.higher))) {
        all_hold = false;
        broken += format("%s%s fails on seed %zu", broken.empty() ? "" : "; ", o.label.c_str(), i + 1);
      }
    }
  }
  report({"C5", "model orderings on 3 seeds", all_hold,
          all_hold ? format("%zu orderings hold on seeds 1, 2, 3", orderings.size()) : broken});

  const double gat = ref.stress.at("gat"), mlp = ref.stress.at("mlp");
  report({"C6", "stress-trained GAT test averaged stress", gat <= 0.8 && gat < mlp,
          format("seed 1: gat %.4f (bound 0.8), mlp baseline %.4f", gat, mlp)});
}

// Random connected graph: a random spanning tree plus extra distinct edges.
Graph graph_with_edges(int n, int edges, Rng& rng) {
  std::vector<std::pair<int, int>> list;
  std::set<std::pair<int, int>> seen;
  auto add = [&](int a, int b) {
    if (a == b) return;
    const auto e = std::minmax(a, b);
    if (seen.insert(e).second) list.emplace_back(e.first, e.second);
  };
  for (int v = 1; v < n; ++v) add(v, static_cast<int>(rng.uniform_int(0, v - 1)));
  while (static_cast<int>(list.size()) < edges) {
    add(static_cast<int>(rng.uniform_int(0, n - 1)), static_cast<int>(rng.uniform_int(0, n - 1)));
  }
  return Graph(n, list);
}

double epoch_seconds(int edges) {
  Rng rng(77);
  GraphDataset ds;
  for (int i = 0; i < 24; ++i) {
    ds.graphs.push_back(graph_with_edges(150, edges, rng));
    ds.splits.push_back(i < 20 ? Split::Train : Split::Validation);
  }
  TrainRunConfig cfg;
  cfg.model.kind = Aggregator::GAT;
  cfg.task = TaskKind::Supervised;
  cfg.epochs = 2;
  cfg.patience = 2;
  cfg.batch_graphs = 10;
  const auto tr = ds.indices(Split::Train);
  const auto va = ds.indices(Split::Validation);
  const PreparedSamples train_set = prepare_samples(ds, tr, cfg);
  const PreparedSamples val_set = prepare_samples(ds, va, cfg);
  double best = 1e300;
  for (int rep = 0; rep < 3; ++rep) {
    const auto start = Clock::now();
    train(train_set.samples, val_set.samples, cfg);
    best = std::min(best, seconds_since(start) / cfg.epochs);
  }
  return best;
}

Verdict linear_scaling() {
  const double sparse = epoch_seconds(300);
  const double dense = epoch_seconds(600);
  const double ratio = dense / sparse;
  return {"C8", "epoch time when edges double at fixed node count", ratio < 2.5,
          format("%.3f s -> %.3f s, ratio %.2f (bound 2.5); exact published table cells and large-matrix "
                 "wall-clock comparisons are out of scope at this scale",
                 sparse, dense, ratio)};
}

}  // namespace

void run_property_group(const Report& report) {
  report(gradient_suite());
  report(procrustes_invariance());
  report(segment_oracle());
  report(eigensolver_residual());
  report(forward_equivariance());
  report(bfs_exhaustive());
  report(cycle_stress());
}

void run_training_group(const Report& report) {
  const AestheteOutcome aesthete = aesthete_accuracy_check();
  report(aesthete.verdict);
  report(crossing_elimination(aesthete.model));
  drawer_criteria(report);
  report(linear_scaling());
}

}  // namespace nd::acceptance
