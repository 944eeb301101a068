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

// Per-graph layout optimization: P <- P - lr * grad(loss), or Adam, over
// stress, the aesthete crossing loss, their weighted sum, or an alternating
// schedule of the two.

#ifndef NEURAL_DRAWER_DESCENT_HPP
#define NEURAL_DRAWER_DESCENT_HPP

#include <cstdint>
#include <string_view>
#include <vector>

#include "neural_drawer/aesthete.hpp"
#include "neural_drawer/graph.hpp"
#include "neural_drawer/losses.hpp"
#include "neural_drawer/matrix.hpp"

namespace nd {

enum class Optimizer { GradientDescent, Adam };
enum class LayoutLoss { Stress, Aesthete, Combined };

std::string_view optimizer_name(Optimizer o);
std::string_view layout_loss_name(LayoutLoss l);

struct DescentConfig {
  int steps = 2000;
  double learning_rate = 0.01;
  Optimizer optimizer = Optimizer::GradientDescent;
  /// Edge pairs sampled per step for the aesthete term.
  std::size_t pair_batch = 10;
  /// Learning rate at step s is learning_rate * decay^s.
  double decay = 1.0;
  /// Weight of the aesthete term for LayoutLoss::Combined.
  double lambda = 0.5;
  bool normalize_pairs = true;
  std::uint64_t seed = 0;
  StressConfig stress{};

  /// Throws std::invalid_argument on out-of-range values. steps == 0 is
  /// accepted and leaves the layout untouched.
  void validate() const;
};

/// Side inputs; which are required depends on the loss.
struct DescentInputs {
  const DistanceMatrix* distances = nullptr;
  const AestheteModel* aesthete = nullptr;
};

struct DescentResult {
  Layout layout;
  /// Loss evaluated at each step before the update.
  std::vector<double> trace;
};

/// N x 2 coordinates i.i.d. uniform in [0, 1].
Layout init_layout(int node_count, std::uint64_t seed);
Layout init_layout(const Graph& g, std::uint64_t seed);

/// Starts from init_layout(g, cfg.seed). Throws DivergenceError carrying the
/// trace so far when the loss stops being finite.
DescentResult optimize_layout(const Graph& g, LayoutLoss loss, const DescentConfig& cfg, const DescentInputs& in);
DescentResult optimize_layout(const Graph& g, LayoutLoss loss, Layout start, const DescentConfig& cfg,
                              const DescentInputs& in);

/// Odd steps (counting from 1) descend stress, even steps the aesthete loss.
DescentResult alternating_optimize(const Graph& g, const DescentConfig& cfg, const DescentInputs& in);
DescentResult alternating_optimize(const Graph& g, Layout start, const DescentConfig& cfg, const DescentInputs& in);

/// Nodes evenly spaced on a circle of radius r.
Layout circular_layout(int node_count, double radius = 1.0);

/// Kamada-Kawai style target: stress with d^-2 weights minimized with Adam
/// from a circular start until the relative change drops below tolerance.
Layout kamada_kawai_target(const Graph& g, int max_steps = 3000, double tolerance = 1e-10);

}  // namespace nd

#endif  // NEURAL_DRAWER_DESCENT_HPP
