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

#ifndef NEURAL_DRAWER_TRAINING_HPP
#define NEURAL_DRAWER_TRAINING_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "neural_drawer/aesthete.hpp"
#include "neural_drawer/gnd.hpp"
#include "neural_drawer/graph.hpp"
#include "neural_drawer/losses.hpp"

namespace nd {

enum class TaskKind { Supervised, Stress, AestheteGuided };
enum class TargetKind { Spectral, KamadaKawai };
enum class Metric { Procrustes, AveragedStress, Crossings };

std::string_view task_name(TaskKind t);
std::optional<TaskKind> parse_task(std::string_view name);
std::string_view target_name(TargetKind t);
std::optional<TargetKind> parse_target(std::string_view name);
std::string_view metric_name(Metric m);
std::optional<Metric> parse_metric(std::string_view name);

struct TrainRunConfig {
  GndSpec model;
  TaskKind task = TaskKind::Supervised;
  TargetKind target = TargetKind::Spectral;
  double learning_rate = 1e-2;
  std::size_t batch_graphs = 32;
  int epochs = 100;
  int patience = 20;
  std::uint64_t seed = 0;
  /// Weight of the aesthete term for TaskKind::AestheteGuided.
  double lambda = 0.5;
  /// Edge pairs per graph for the aesthete term; 0 uses every disjoint pair.
  std::size_t aesthete_pairs = 0;
  /// Zero-pad Laplacian PE on graphs with at most k nodes instead of failing.
  bool pad_small_graphs = true;

  void validate() const;
};

/// Per-graph data precomputed once before training.
struct GraphSample {
  std::size_t dataset_index = 0;
  Graph graph;
  GraphContext context;
  Matrix pe;  // N x k, empty in random-feature mode
  DistanceMatrix distances;
  StressTerms stress_terms;
  std::optional<Layout> target;
  std::vector<std::pair<int, int>> disjoint_pairs;
};

struct PreparedSamples {
  std::vector<GraphSample> samples;
  /// Dataset indices skipped because they cannot carry the task's target
  /// (spectral targets need N >= 3, Procrustes needs N >= 2).
  std::vector<std::size_t> skipped;
};

/// Builds samples for the listed dataset graphs. Targets are computed when
/// the task is supervised.
PreparedSamples prepare_samples(const GraphDataset& dataset, std::span<const std::size_t> indices,
                                const TrainRunConfig& cfg);

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
};

struct TrainResult {
  GndModel model;  // parameters from the best validation epoch
  std::vector<EpochRecord> history;
  int best_epoch = 0;
  double best_val_loss = 0.0;
};

/// Adam over mini-batches of cfg.batch_graphs graphs with early stopping on
/// the validation loss. The batch loss is the mean of per-graph losses.
/// Graphs of a batch run on parallel tapes; gradients are summed in graph
/// order. Throws DivergenceError naming the epoch on a non-finite loss.
TrainResult train(std::span<const GraphSample> train_set, std::span<const GraphSample> val_set,
                  const TrainRunConfig& cfg, const AestheteModel* aesthete = nullptr);

/// Same protocol with a per-node MLP (no message passing).
TrainResult mlp_baseline_train(std::span<const GraphSample> train_set, std::span<const GraphSample> val_set,
                               TrainRunConfig cfg, const AestheteModel* aesthete = nullptr);

/// Task loss of one graph in eval mode.
double sample_loss(const GndModel& model, const GraphSample& sample, const TrainRunConfig& cfg,
                   const AestheteModel* aesthete = nullptr);

/// Layout produced by the model. Random-feature models draw their features
/// from a generator seeded by (seed, dataset_index).
Layout predict_layout(const GndModel& model, const GraphSample& sample, std::uint64_t seed = 0);

struct Evaluation {
  double mean = 0.0;
  std::vector<double> per_graph;
};

/// Mean of a metric over samples. Procrustes requires targets.
Evaluation evaluate(const GndModel& model, std::span<const GraphSample> samples, Metric metric,
                    std::uint64_t seed = 0);

}  // namespace nd

#endif  // NEURAL_DRAWER_TRAINING_HPP
