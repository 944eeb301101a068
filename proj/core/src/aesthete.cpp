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

#include "neural_drawer/aesthete.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "neural_drawer/adam.hpp"
#include "neural_drawer/errors.hpp"
#include "neural_drawer/rng.hpp"

namespace nd {

std::vector<CrossingExample> build_crossing_dataset(std::size_t size, std::uint64_t seed) {
  if (size % 2 != 0) throw std::invalid_argument("build_crossing_dataset: size must be even");
  const std::size_t per_class = size / 2;
  std::vector<CrossingExample> positives;
  std::vector<CrossingExample> negatives;
  positives.reserve(per_class);
  negatives.reserve(per_class);
  Rng rng(seed);
  while (positives.size() < per_class || negatives.size() < per_class) {
    CrossingExample ex;
    for (double& x : ex.input) x = rng.uniform();
    ex.target = segments_intersect(ex.input) ? 1 : 0;
    auto& bucket = ex.target ? positives : negatives;
    if (bucket.size() < per_class) bucket.push_back(ex);
  }
  // Interleave, then shuffle so the order carries no label information.
  std::vector<CrossingExample> out;
  out.reserve(size);
  for (std::size_t i = 0; i < per_class; ++i) {
    out.push_back(positives[i]);
    out.push_back(negatives[i]);
  }
  rng.shuffle(std::span<CrossingExample>(out));
  return out;
}

AestheteModel::AestheteModel(std::uint64_t seed) {
  Rng rng(seed);
  params_.emplace_back("w1", ad::glorot_uniform(kInputs, kHidden, rng));
  params_.emplace_back("b1", Matrix(1, kHidden));
  params_.emplace_back("w2", ad::glorot_uniform(kHidden, kHidden, rng));
  params_.emplace_back("b2", Matrix(1, kHidden));
  params_.emplace_back("w3", ad::glorot_uniform(kHidden, 1, rng));
  params_.emplace_back("b3", Matrix(1, 1));
}

ad::Tensor AestheteModel::logits(ad::Tape& tape, const ad::Tensor& pairs) const {
  if (params_.empty()) throw std::logic_error("AestheteModel: model has no parameters");
  if (pairs.cols() != kInputs) {
    throw ShapeError("AestheteModel::logits: expected B x 8 input, got " + pairs.value().shape_string());
  }
  // Inputs live in the unit square; centring them speeds up training.
  const ad::Tensor centred = ad::add_scalar(pairs, -0.5);
  ad::Tensor h = ad::relu(ad::matmul(centred, tape.parameter(params_[0])) + tape.parameter(params_[1]));
  h = ad::relu(ad::matmul(h, tape.parameter(params_[2])) + tape.parameter(params_[3]));
  return ad::matmul(h, tape.parameter(params_[4])) + tape.parameter(params_[5]);
}

ad::Tensor AestheteModel::probability(ad::Tape& tape, const ad::Tensor& pairs) const {
  return ad::sigmoid(logits(tape, pairs));
}

double AestheteModel::score(const ArcPair& pair) const {
  return score(std::span<const ArcPair>(&pair, 1)).front();
}

std::vector<double> AestheteModel::score(std::span<const ArcPair> pairs) const {
  Matrix x(pairs.size(), kInputs);
  for (std::size_t i = 0; i < pairs.size(); ++i)
    std::copy(pairs[i].begin(), pairs[i].end(), x.row(i).begin());
  ad::Tape tape;
  const Matrix& y = probability(tape, tape.constant(std::move(x))).value();
  return std::vector<double>(y.values().begin(), y.values().end());
}

namespace {

// Mean binary cross-entropy computed from logits: softplus(z) - t * z.
ad::Tensor bce_with_logits(const ad::Tensor& z, const ad::Tensor& targets) {
  ad::Tensor softplus = ad::relu(z) + ad::log(ad::add_scalar(ad::exp(ad::neg(ad::abs(z))), 1.0));
  return ad::mean(softplus - targets * z);
}

}  // namespace

AestheteModel train_aesthete(std::span<const CrossingExample> train, const AestheteTrainConfig& config,
                             AestheteTrainReport* report) {
  if (train.empty()) throw std::invalid_argument("train_aesthete: empty training set");
  if (config.batch_size == 0) throw std::invalid_argument("train_aesthete: batch size must be positive");
  AestheteModel model(derive_seed(config.seed, 1));
  AdamState adam(AdamConfig{config.learning_rate});
  Rng rng(derive_seed(config.seed, 2));
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double loss_sum = 0.0;
    std::size_t batches = 0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t b = std::min(config.batch_size, order.size() - start);
      Matrix x(b, AestheteModel::kInputs);
      Matrix t(b, 1);
      for (std::size_t i = 0; i < b; ++i) {
        const CrossingExample& ex = train[order[start + i]];
        std::copy(ex.input.begin(), ex.input.end(), x.row(i).begin());
        t(i, 0) = ex.target;
      }
      ad::Tape tape;
      ad::Tensor z = model.logits(tape, tape.constant(std::move(x)));
      ad::Tensor loss = bce_with_logits(z, tape.constant(t));
      const double value = loss.item();
      if (!std::isfinite(value)) {
        throw DivergenceError("train_aesthete: non-finite loss in epoch " + std::to_string(epoch),
                              report ? report->epoch_loss : std::vector<double>{});
      }
      for (std::size_t i = 0; i < b; ++i) correct += ((z.value()[i] > 0.0) == (t(i, 0) > 0.5)) ? 1 : 0;
      tape.backward(loss);
      for (ad::Parameter& p : model.parameters()) p.zero_grad();
      tape.accumulate_parameter_gradients(model.parameters());
      adam_step(model.parameters(), adam);
      loss_sum += value;
      ++batches;
    }
    if (report) {
      report->epoch_loss.push_back(loss_sum / static_cast<double>(batches));
      report->epoch_accuracy.push_back(static_cast<double>(correct) / static_cast<double>(train.size()));
    }
  }
  return model;
}

double aesthete_accuracy(const AestheteModel& model, std::span<const CrossingExample> examples) {
  if (examples.empty()) return 0.0;
  std::size_t correct = 0;
  constexpr std::size_t kChunk = 4096;
  std::vector<ArcPair> inputs;
  for (std::size_t start = 0; start < examples.size(); start += kChunk) {
    const std::size_t b = std::min(kChunk, examples.size() - start);
    inputs.clear();
    for (std::size_t i = 0; i < b; ++i) inputs.push_back(examples[start + i].input);
    const std::vector<double> y = model.score(inputs);
    for (std::size_t i = 0; i < b; ++i) {
      if ((y[i] > 0.5) == (examples[start + i].target == 1)) ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(examples.size());
}

namespace {

struct PairFrame {
  double scale = 0.0;  // side of the bounding square; 0 when degenerate
  double center[2] = {0.0, 0.0};
  int arg_min[2] = {0, 0};
  int arg_max[2] = {0, 0};
  int dominant = 0;  // axis whose extent defines the square
};

PairFrame frame_of(const double* row) {
  PairFrame f;
  for (int axis = 0; axis < 2; ++axis) {
    int lo = axis;
    int hi = axis;
    for (int j = axis; j < 8; j += 2) {
      if (row[j] < row[lo]) lo = j;
      if (row[j] > row[hi]) hi = j;
    }
    f.arg_min[axis] = lo;
    f.arg_max[axis] = hi;
    f.center[axis] = 0.5 * (row[lo] + row[hi]);
  }
  const double rx = row[f.arg_max[0]] - row[f.arg_min[0]];
  const double ry = row[f.arg_max[1]] - row[f.arg_min[1]];
  f.dominant = rx >= ry ? 0 : 1;
  f.scale = std::max(rx, ry);
  if (f.scale < 1e-12) f.scale = 0.0;
  return f;
}

}  // namespace

ArcPair normalize_arc_pair(const ArcPair& pair) {
  const PairFrame f = frame_of(pair.data());
  ArcPair out;
  for (int j = 0; j < 8; ++j) out[j] = f.scale == 0.0 ? 0.5 : 0.5 + (pair[j] - f.center[j % 2]) / f.scale;
  return out;
}

ad::Tensor normalize_arc_pairs(const ad::Tensor& pairs) {
  const Matrix& x = pairs.value();
  if (x.cols() != 8) throw ShapeError("normalize_arc_pairs: expected B x 8, got " + x.shape_string());
  Matrix out(x.rows(), 8);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const ArcPair row = [&] {
      ArcPair a;
      std::copy(x.row(r).begin(), x.row(r).end(), a.begin());
      return a;
    }();
    const ArcPair n = normalize_arc_pair(row);
    std::copy(n.begin(), n.end(), out.row(r).begin());
  }
  const std::size_t id = pairs.id();
  return pairs.tape()->record(std::move(out), {pairs}, [id](ad::Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    const Matrix& x = t.value(id);
    Matrix& gx = t.grad_buffer(id);
    for (std::size_t r = 0; r < x.rows(); ++r) {
      const double* row = x.data() + r * 8;
      const double* gr = g.data() + r * 8;
      double* out = gx.data() + r * 8;
      const PairFrame f = frame_of(row);
      if (f.scale == 0.0) continue;
      const double s = f.scale;
      double axis_sum[2] = {0.0, 0.0};
      double d_scale = 0.0;
      for (int j = 0; j < 8; ++j) {
        out[j] += gr[j] / s;
        axis_sum[j % 2] += gr[j];
        d_scale -= gr[j] * (row[j] - f.center[j % 2]) / (s * s);
      }
      for (int axis = 0; axis < 2; ++axis) {
        const double d_center = -axis_sum[axis] / s;
        out[f.arg_min[axis]] += 0.5 * d_center;
        out[f.arg_max[axis]] += 0.5 * d_center;
      }
      out[f.arg_max[f.dominant]] += d_scale;
      out[f.arg_min[f.dominant]] -= d_scale;
    }
  });
}

std::vector<std::pair<int, int>> disjoint_edge_pairs(const Graph& g) {
  std::vector<std::pair<int, int>> pairs;
  const auto edges = g.edges();
  for (std::size_t a = 0; a < edges.size(); ++a) {
    for (std::size_t b = a + 1; b < edges.size(); ++b) {
      const Edge& e = edges[a];
      const Edge& f = edges[b];
      if (e.u == f.u || e.u == f.v || e.v == f.u || e.v == f.v) continue;
      pairs.emplace_back(static_cast<int>(a), static_cast<int>(b));
    }
  }
  return pairs;
}

ad::Tensor gather_arc_pairs(const ad::Tensor& layout, const Graph& g,
                            std::span<const std::pair<int, int>> pairs) {
  if (layout.cols() != 2 || layout.rows() != static_cast<std::size_t>(g.node_count())) {
    throw ShapeError("gather_arc_pairs: layout " + layout.value().shape_string() + " for " +
                     std::to_string(g.node_count()) + " nodes");
  }
  const auto edges = g.edges();
  std::vector<int> idx[4];
  for (const auto& [a, b] : pairs) {
    idx[0].push_back(edges[a].u);
    idx[1].push_back(edges[a].v);
    idx[2].push_back(edges[b].u);
    idx[3].push_back(edges[b].v);
  }
  return ad::concat({ad::gather_rows(layout, idx[0]), ad::gather_rows(layout, idx[1]),
                     ad::gather_rows(layout, idx[2]), ad::gather_rows(layout, idx[3])});
}

ad::Tensor aesthete_loss(const AestheteModel& model, const ad::Tensor& layout, const Graph& g,
                         std::span<const std::pair<int, int>> pairs, bool normalize) {
  ad::Tape& tape = *layout.tape();
  if (pairs.empty()) return tape.constant(Matrix(1, 1));
  ad::Tensor x = gather_arc_pairs(layout, g, pairs);
  if (normalize) x = normalize_arc_pairs(x);
  ad::Tensor y = model.probability(tape, x);
  // -log(1 - y + eps)
  return ad::neg(ad::sum(ad::log(ad::add_scalar(ad::neg(y), 1.0 + kLogEpsilon))));
}

}  // namespace nd
