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

#include "neural_drawer/gnd.hpp"

#include <cmath>
#include <stdexcept>

#include "neural_drawer/errors.hpp"
#include "neural_drawer/spectral.hpp"

namespace nd {

std::string_view aggregator_name(Aggregator a) {
  switch (a) {
    case Aggregator::GCN:
      return "gcn";
    case Aggregator::GAT:
      return "gat";
    case Aggregator::GIN:
      return "gin";
    case Aggregator::MLP:
      return "mlp";
  }
  return "unknown";
}

std::optional<Aggregator> parse_aggregator(std::string_view name) {
  for (Aggregator a : {Aggregator::GCN, Aggregator::GAT, Aggregator::GIN, Aggregator::MLP}) {
    if (aggregator_name(a) == name) return a;
  }
  return std::nullopt;
}

std::string_view feature_mode_name(FeatureMode m) {
  return m == FeatureMode::LaplacianPE ? "laplacian-pe" : "random-uniform";
}

std::optional<FeatureMode> parse_feature_mode(std::string_view name) {
  if (name == "laplacian-pe" || name == "pe") return FeatureMode::LaplacianPE;
  if (name == "random-uniform" || name == "random") return FeatureMode::RandomUniform;
  return std::nullopt;
}

GraphContext make_context(const Graph& g) {
  GraphContext ctx;
  const int n = g.node_count();
  ctx.node_count = n;
  const std::size_t directed = 2 * g.edge_count();
  ctx.source.reserve(directed);
  ctx.target.reserve(directed);
  ctx.self_source.reserve(directed + n);
  ctx.self_target.reserve(directed + n);
  std::vector<double> coef;
  coef.reserve(directed + n);
  for (int v = 0; v < n; ++v) {
    const double dv = g.degree(v) + 1.0;
    ctx.self_source.push_back(v);
    ctx.self_target.push_back(v);
    coef.push_back(1.0 / dv);
    for (int u : g.neighbors(v)) {
      ctx.source.push_back(u);
      ctx.target.push_back(v);
      ctx.self_source.push_back(u);
      ctx.self_target.push_back(v);
      coef.push_back(1.0 / std::sqrt((g.degree(u) + 1.0) * dv));
    }
  }
  const std::size_t count = coef.size();
  ctx.gcn_coefficient = Matrix(count, 1, std::move(coef));
  return ctx;
}

namespace {

void check_states(const ad::Tensor& states, const GraphContext& ctx, const char* who) {
  if (states.rows() != static_cast<std::size_t>(ctx.node_count)) {
    throw ShapeError(std::string(who) + ": states have " + std::to_string(states.rows()) + " rows for " +
                     std::to_string(ctx.node_count) + " nodes");
  }
}

void check_inner(const ad::Tensor& states, const ad::Tensor& weight, const char* who) {
  if (states.cols() != weight.rows()) {
    throw ShapeError(std::string(who) + ": states " + states.value().shape_string() + " vs weight " +
                     weight.value().shape_string());
  }
}

}  // namespace

ad::Tensor gcn_layer(const ad::Tensor& states, const GraphContext& ctx, const ad::Tensor& weight,
                     const ad::Tensor& bias) {
  check_states(states, ctx, "gcn_layer");
  check_inner(states, weight, "gcn_layer");
  ad::Tape& tape = *states.tape();
  ad::Tensor z = ad::matmul(states, weight);
  ad::Tensor msg = ad::gather_rows(z, ctx.self_source) * tape.constant(ctx.gcn_coefficient);
  ad::Tensor agg = ad::segment_sum(msg, ctx.self_target, static_cast<std::size_t>(ctx.node_count));
  return ad::relu(agg + bias);
}

namespace {

// Attention logits and softmax for one head; z_head is N x out.
ad::Tensor head_attention(const ad::Tensor& z_head, const GraphContext& ctx, const ad::Tensor& att_source,
                          const ad::Tensor& att_target, int head, double slope) {
  ad::Tensor s_src = ad::matmul(z_head, ad::slice_cols(att_source, static_cast<std::size_t>(head), 1));
  ad::Tensor s_dst = ad::matmul(z_head, ad::slice_cols(att_target, static_cast<std::size_t>(head), 1));
  ad::Tensor e = ad::leaky_relu(ad::gather_rows(s_src, ctx.self_source) + ad::gather_rows(s_dst, ctx.self_target),
                                slope);
  return ad::softmax_over_segments(e, ctx.self_target, static_cast<std::size_t>(ctx.node_count));
}

}  // namespace

ad::Tensor gat_layer(const ad::Tensor& states, const GraphContext& ctx, const GatWeights& w, int heads,
                     bool concat_heads, double slope) {
  check_states(states, ctx, "gat_layer");
  check_inner(states, w.weight, "gat_layer");
  if (heads < 1 || w.weight.cols() % static_cast<std::size_t>(heads) != 0) {
    throw ShapeError("gat_layer: weight columns not divisible by head count");
  }
  const std::size_t out = w.weight.cols() / static_cast<std::size_t>(heads);
  if (w.att_source.rows() != out || w.att_source.cols() != static_cast<std::size_t>(heads) ||
      !w.att_source.value().same_shape(w.att_target.value())) {
    throw ShapeError("gat_layer: attention vectors must be out x heads");
  }
  const std::size_t n = static_cast<std::size_t>(ctx.node_count);
  ad::Tensor z = ad::matmul(states, w.weight);
  std::vector<ad::Tensor> outputs;
  outputs.reserve(static_cast<std::size_t>(heads));
  for (int h = 0; h < heads; ++h) {
    ad::Tensor zh = ad::slice_cols(z, static_cast<std::size_t>(h) * out, out);
    ad::Tensor alpha = head_attention(zh, ctx, w.att_source, w.att_target, h, slope);
    outputs.push_back(ad::segment_sum(ad::gather_rows(zh, ctx.self_source) * alpha, ctx.self_target, n));
  }
  ad::Tensor merged;
  if (concat_heads) {
    merged = ad::concat(outputs, ad::Axis::Cols);
  } else {
    merged = outputs[0];
    for (std::size_t h = 1; h < outputs.size(); ++h) merged = merged + outputs[h];
    merged = ad::scale(merged, 1.0 / heads);
  }
  return ad::relu(merged + w.bias);
}

Matrix gat_attention(const Matrix& states, const GraphContext& ctx, const Matrix& weight, const Matrix& att_source,
                     const Matrix& att_target, int heads, int head, double slope) {
  ad::Tape tape;
  ad::Tensor x = tape.constant(states);
  ad::Tensor w = tape.constant(weight);
  const std::size_t out = weight.cols() / static_cast<std::size_t>(heads);
  ad::Tensor zh = ad::slice_cols(ad::matmul(x, w), static_cast<std::size_t>(head) * out, out);
  return head_attention(zh, ctx, tape.constant(att_source), tape.constant(att_target), head, slope).value();
}

ad::Tensor gin_aggregate(const ad::Tensor& states, const GraphContext& ctx, double epsilon) {
  check_states(states, ctx, "gin_aggregate");
  ad::Tensor neighbours =
      ad::segment_sum(ad::gather_rows(states, ctx.source), ctx.target, static_cast<std::size_t>(ctx.node_count));
  return ad::scale(states, 1.0 + epsilon) + neighbours;
}

ad::Tensor gin_layer(const ad::Tensor& states, const GraphContext& ctx, const GinWeights& w, double epsilon) {
  check_inner(states, w.w1, "gin_layer");
  ad::Tensor agg = gin_aggregate(states, ctx, epsilon);
  ad::Tensor hidden = ad::relu(ad::matmul(agg, w.w1) + w.b1);
  return ad::relu(ad::matmul(hidden, w.w2) + w.b2);
}

void GndSpec::validate() const {
  if (input_dim < 1) throw std::invalid_argument("GndSpec: input dimension must be positive");
  if (hidden < 1) throw std::invalid_argument("GndSpec: hidden size must be positive");
  if (layers < 1) throw std::invalid_argument("GndSpec: at least one layer is required");
  if (kind == Aggregator::GAT && heads < 1) throw std::invalid_argument("GndSpec: heads must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw std::invalid_argument("GndSpec: dropout must be in [0, 1)");
}

GndModel::GndModel(const GndSpec& spec, std::uint64_t seed) : spec_(spec) {
  spec_.validate();
  Rng rng(seed);
  const std::size_t h = spec_.hidden;
  for (int l = 0; l < spec_.layers; ++l) {
    const std::size_t in = l == 0 ? spec_.input_dim : layer_output_dim(l - 1);
    const std::string prefix = "layer" + std::to_string(l) + ".";
    switch (spec_.kind) {
      case Aggregator::GCN:
      case Aggregator::MLP:
        add_param(prefix + "weight", ad::glorot_uniform(in, h, rng));
        add_param(prefix + "bias", Matrix(1, h));
        break;
      case Aggregator::GAT: {
        const auto heads = static_cast<std::size_t>(spec_.heads);
        add_param(prefix + "weight", ad::glorot_uniform(in, heads * h, rng));
        add_param(prefix + "att_source", ad::glorot_uniform(h, heads, rng));
        add_param(prefix + "att_target", ad::glorot_uniform(h, heads, rng));
        add_param(prefix + "bias", Matrix(1, layer_output_dim(l)));
        break;
      }
      case Aggregator::GIN:
        add_param(prefix + "mlp1.weight", ad::glorot_uniform(in, h, rng));
        add_param(prefix + "mlp1.bias", Matrix(1, h));
        add_param(prefix + "mlp2.weight", ad::glorot_uniform(h, h, rng));
        add_param(prefix + "mlp2.bias", Matrix(1, h));
        break;
    }
  }
  add_param("readout.weight", ad::glorot_uniform(layer_output_dim(spec_.layers - 1), 2, rng));
  add_param("readout.bias", Matrix(1, 2));
}

void GndModel::add_param(std::string name, Matrix value) { params_.emplace_back(std::move(name), std::move(value)); }

std::size_t GndModel::layer_output_dim(int layer) const {
  if (spec_.kind == Aggregator::GAT && layer < spec_.layers - 1) {
    return spec_.hidden * static_cast<std::size_t>(spec_.heads);
  }
  return spec_.hidden;
}

namespace {

ad::Tensor dropout(const ad::Tensor& x, double rate, Rng& rng) {
  Matrix mask(x.rows(), x.cols());
  const double keep = 1.0 / (1.0 - rate);
  for (double& m : mask.values()) m = rng.uniform() < rate ? 0.0 : keep;
  return x * x.tape()->constant(std::move(mask));
}

}  // namespace

ad::Tensor GndModel::forward(ad::Tape& tape, const GraphContext& ctx, const ad::Tensor& features, bool training,
                             Rng* dropout_rng) const {
  if (empty()) throw std::logic_error("GndModel: forward on an uninitialized model");
  if (features.cols() != spec_.input_dim) {
    throw ShapeError("GndModel: features have " + std::to_string(features.cols()) + " columns, model expects " +
                     std::to_string(spec_.input_dim));
  }
  if (features.rows() != static_cast<std::size_t>(ctx.node_count)) {
    throw ShapeError("GndModel: features have " + std::to_string(features.rows()) + " rows for " +
                     std::to_string(ctx.node_count) + " nodes");
  }
  const bool drop = training && spec_.dropout > 0.0;
  if (drop && dropout_rng == nullptr) throw std::invalid_argument("GndModel: dropout requires an rng");
  auto param = [&](std::size_t i) { return tape.parameter(params_[i]); };

  ad::Tensor x = features;
  std::size_t p = 0;
  for (int l = 0; l < spec_.layers; ++l) {
    if (drop && l > 0) x = dropout(x, spec_.dropout, *dropout_rng);
    switch (spec_.kind) {
      case Aggregator::GCN:
        x = gcn_layer(x, ctx, param(p), param(p + 1));
        p += 2;
        break;
      case Aggregator::MLP:
        check_inner(x, param(p), "mlp");
        x = ad::relu(ad::matmul(x, param(p)) + param(p + 1));
        p += 2;
        break;
      case Aggregator::GAT: {
        GatWeights w{param(p), param(p + 1), param(p + 2), param(p + 3)};
        x = gat_layer(x, ctx, w, spec_.heads, l < spec_.layers - 1, spec_.leaky_slope);
        p += 4;
        break;
      }
      case Aggregator::GIN: {
        GinWeights w{param(p), param(p + 1), param(p + 2), param(p + 3)};
        x = gin_layer(x, ctx, w, spec_.gin_epsilon);
        p += 4;
        break;
      }
    }
  }
  if (drop) x = dropout(x, spec_.dropout, *dropout_rng);
  return ad::matmul(x, param(p)) + param(p + 1);
}

Layout GndModel::predict(const GraphContext& ctx, const Matrix& features) const {
  ad::Tape tape;
  return forward(tape, ctx, tape.constant(features), false, nullptr).value();
}

Matrix make_features(const Graph& g, FeatureMode mode, std::size_t k, Rng* rng, bool pad_small) {
  if (k < 1) throw std::invalid_argument("make_features: k must be positive");
  if (mode == FeatureMode::RandomUniform) {
    if (rng == nullptr) throw std::invalid_argument("make_features: random features require an rng");
    Matrix f(static_cast<std::size_t>(g.node_count()), k);
    for (double& v : f.values()) v = rng->uniform();
    return f;
  }
  if (pad_small) return laplacian_pe_padded(g, static_cast<int>(k));
  if (k >= static_cast<std::size_t>(g.node_count())) {
    throw std::invalid_argument("make_features: PE dimension k=" + std::to_string(k) +
                                " needs a graph with more than k nodes (graph has " +
                                std::to_string(g.node_count()) + "); use a smaller k or a larger graph");
  }
  return laplacian_pe(g, static_cast<int>(k)).features;
}

}  // namespace nd
