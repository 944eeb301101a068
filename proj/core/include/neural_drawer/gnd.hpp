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

// Graph neural drawers: message-passing stacks (GCN, GAT, GIN) or a per-node
// MLP that map node features to 2D coordinates through a linear readout.

#ifndef NEURAL_DRAWER_GND_HPP
#define NEURAL_DRAWER_GND_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "neural_drawer/autodiff.hpp"
#include "neural_drawer/graph.hpp"
#include "neural_drawer/matrix.hpp"
#include "neural_drawer/rng.hpp"

namespace nd {

enum class Aggregator { GCN, GAT, GIN, MLP };
enum class FeatureMode { LaplacianPE, RandomUniform };

std::string_view aggregator_name(Aggregator a);
std::optional<Aggregator> parse_aggregator(std::string_view name);
std::string_view feature_mode_name(FeatureMode m);
std::optional<FeatureMode> parse_feature_mode(std::string_view name);

/// Edge arrays for message passing. Messages flow source -> target; the
/// "self" arrays add one loop per node.
struct GraphContext {
  int node_count = 0;
  std::vector<int> source;            // directed neighbour edges
  std::vector<int> target;
  std::vector<int> self_source;       // neighbour edges plus self-loops
  std::vector<int> self_target;
  Matrix gcn_coefficient;             // per self_* edge, 1 / sqrt((d_u + 1)(d_v + 1))
};

GraphContext make_context(const Graph& g);

// Single layers on tape tensors. Each applies relu to its output.

/// relu(sum over u in N(v) + v of c_uv x_u W + b).
ad::Tensor gcn_layer(const ad::Tensor& states, const GraphContext& ctx, const ad::Tensor& weight,
                     const ad::Tensor& bias);

struct GatWeights {
  ad::Tensor weight;      // in x (heads * out)
  ad::Tensor att_source;  // out x heads
  ad::Tensor att_target;  // out x heads
  ad::Tensor bias;        // 1 x (heads * out) when concatenating, 1 x out when averaging
};

/// Multi-head attention over N(v) + v. Heads are concatenated, or averaged
/// when concat_heads is false.
ad::Tensor gat_layer(const ad::Tensor& states, const GraphContext& ctx, const GatWeights& w, int heads,
                     bool concat_heads, double slope = 0.2);

/// Attention coefficients of one head, aligned with ctx.self_source.
Matrix gat_attention(const Matrix& states, const GraphContext& ctx, const Matrix& weight,
                     const Matrix& att_source, const Matrix& att_target, int heads, int head, double slope = 0.2);

/// (1 + eps) x_v + sum over u in N(v) of x_u.
ad::Tensor gin_aggregate(const ad::Tensor& states, const GraphContext& ctx, double epsilon);

struct GinWeights {
  ad::Tensor w1, b1, w2, b2;
};

/// relu(relu(aggregate W1 + b1) W2 + b2).
ad::Tensor gin_layer(const ad::Tensor& states, const GraphContext& ctx, const GinWeights& w, double epsilon);

struct GndSpec {
  Aggregator kind = Aggregator::GAT;
  std::size_t input_dim = 10;
  std::size_t hidden = 25;
  int layers = 2;
  int heads = 4;
  double leaky_slope = 0.2;
  double gin_epsilon = 0.0;
  double dropout = 0.0;
  FeatureMode features = FeatureMode::LaplacianPE;

  void validate() const;
};

class GndModel {
 public:
  GndModel() = default;
  GndModel(const GndSpec& spec, std::uint64_t seed);

  const GndSpec& spec() const noexcept { return spec_; }
  std::span<ad::Parameter> parameters() noexcept { return params_; }
  std::span<const ad::Parameter> parameters() const noexcept { return params_; }
  bool empty() const noexcept { return params_.empty(); }

  /// N x 2 coordinates. In training mode dropout at the configured rate is
  /// applied to the node states entering every layer after the first and
  /// the readout; dropout_rng must then be non-null when the rate is positive.
  ad::Tensor forward(ad::Tape& tape, const GraphContext& ctx, const ad::Tensor& features, bool training = false,
                     Rng* dropout_rng = nullptr) const;

  /// Eval-mode forward without gradients.
  Layout predict(const GraphContext& ctx, const Matrix& features) const;

 private:
  void add_param(std::string name, Matrix value);
  std::size_t layer_output_dim(int layer) const;

  GndSpec spec_;
  std::vector<ad::Parameter> params_;
};

/// Node features for a model input. Laplacian-PE mode returns the k smallest
/// non-trivial eigenvectors (zero-padded when pad_small is set and the graph
/// has fewer than k + 1 nodes; otherwise k >= N throws). Random mode samples
/// uniform [0, 1] values from rng on every call.
Matrix make_features(const Graph& g, FeatureMode mode, std::size_t k, Rng* rng = nullptr, bool pad_small = false);

}  // namespace nd

#endif  // NEURAL_DRAWER_GND_HPP
