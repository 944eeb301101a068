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

// Learned edge-crossing critic. An MLP (8 -> 100 -> 100 -> 1, relu hidden,
// sigmoid output) is trained on exactly labelled random arc pairs; its output
// is a smooth "degree of intersection" whose cross-entropy against the
// no-crossing target drives layouts apart.

#ifndef NEURAL_DRAWER_AESTHETE_HPP
#define NEURAL_DRAWER_AESTHETE_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "neural_drawer/autodiff.hpp"
#include "neural_drawer/geometry.hpp"
#include "neural_drawer/graph.hpp"

namespace nd {

struct CrossingExample {
  ArcPair input{};
  int target = 0;  // 1 if the arcs intersect
};

/// Balanced synthetic set: coordinates uniform in [0, 1], rejection-sampled
/// to size / 2 crossing and size / 2 non-crossing pairs. size must be even.
std::vector<CrossingExample> build_crossing_dataset(std::size_t size, std::uint64_t seed);

class AestheteModel {
 public:
  static constexpr std::size_t kInputs = 8;
  static constexpr std::size_t kHidden = 100;

  AestheteModel() = default;
  /// Glorot-uniform weights, zero biases.
  explicit AestheteModel(std::uint64_t seed);

  /// Pre-sigmoid scores for a B x 8 batch.
  ad::Tensor logits(ad::Tape& tape, const ad::Tensor& pairs) const;
  /// Crossing probabilities in (0, 1) for a B x 8 batch.
  ad::Tensor probability(ad::Tape& tape, const ad::Tensor& pairs) const;
  /// Probability for a single pair, evaluated on raw coordinates.
  double score(const ArcPair& pair) const;
  /// Batched scoring without a tape.
  std::vector<double> score(std::span<const ArcPair> pairs) const;

  std::span<ad::Parameter> parameters() noexcept { return params_; }
  std::span<const ad::Parameter> parameters() const noexcept { return params_; }
  bool empty() const noexcept { return params_.empty(); }

 private:
  std::vector<ad::Parameter> params_;  // w1, b1, w2, b2, w3, b3
};

struct AestheteTrainConfig {
  std::size_t batch_size = 256;
  double learning_rate = 1e-3;
  int epochs = 40;
  std::uint64_t seed = 1;
};

struct AestheteTrainReport {
  std::vector<double> epoch_loss;
  std::vector<double> epoch_accuracy;  // on the training set, after each epoch
};

/// Minimizes binary cross-entropy with Adam over shuffled mini-batches.
/// Throws DivergenceError if the loss becomes non-finite.
AestheteModel train_aesthete(std::span<const CrossingExample> train, const AestheteTrainConfig& config,
                             AestheteTrainReport* report = nullptr);

/// Fraction of examples whose thresholded score (> 0.5) matches the target.
double aesthete_accuracy(const AestheteModel& model, std::span<const CrossingExample> examples);

/// Min-max normalizes each row of a B x 8 pair batch to the pair's own
/// bounding square centred at (0.5, 0.5); a degenerate square maps every
/// coordinate to 0.5. Differentiable.
ad::Tensor normalize_arc_pairs(const ad::Tensor& pairs);
ArcPair normalize_arc_pair(const ArcPair& pair);

/// Unordered pairs of edge indices (a < b) whose edges share no endpoint.
std::vector<std::pair<int, int>> disjoint_edge_pairs(const Graph& g);

/// Stacks the coordinates of the listed edge pairs into a B x 8 tensor.
ad::Tensor gather_arc_pairs(const ad::Tensor& layout, const Graph& g,
                            std::span<const std::pair<int, int>> pairs);

inline constexpr double kLogEpsilon = 1e-12;

/// Sum over pairs of -log(1 - y + 1e-12), y the crossing probability of each
/// listed edge pair under the current layout. Gradients flow into layout.
ad::Tensor aesthete_loss(const AestheteModel& model, const ad::Tensor& layout, const Graph& g,
                         std::span<const std::pair<int, int>> pairs, bool normalize = true);

}  // namespace nd

#endif  // NEURAL_DRAWER_AESTHETE_HPP
