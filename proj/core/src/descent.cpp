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

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "neural_drawer/adam.hpp"
#include "neural_drawer/errors.hpp"
#include "neural_drawer/rng.hpp"

namespace nd {

std::string_view optimizer_name(Optimizer o) {
  return o == Optimizer::Adam ? "adam" : "gd";
}

std::string_view layout_loss_name(LayoutLoss l) {
  switch (l) {
    case LayoutLoss::Stress:
      return "stress";
    case LayoutLoss::Aesthete:
      return "aesthete";
    case LayoutLoss::Combined:
      return "combined";
  }
  return "unknown";
}

void DescentConfig::validate() const {
  if (steps < 0) throw std::invalid_argument("descent: steps must be non-negative");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw std::invalid_argument("descent: learning rate must be positive");
  }
  if (pair_batch < 1) throw std::invalid_argument("descent: pair batch must be at least 1");
  if (!(decay > 0.0) || decay > 1.0) throw std::invalid_argument("descent: decay must be in (0, 1]");
  if (!(lambda >= 0.0)) throw std::invalid_argument("descent: lambda must be non-negative");
}

Layout init_layout(int node_count, std::uint64_t seed) {
  if (node_count < 0) throw std::invalid_argument("init_layout: negative node count");
  Rng rng(seed);
  Layout p(static_cast<std::size_t>(node_count), 2);
  for (double& v : p.values()) v = rng.uniform();
  return p;
}

Layout init_layout(const Graph& g, std::uint64_t seed) { return init_layout(g.node_count(), seed); }

namespace {

enum class StepKind { Stress, Aesthete, Combined };

// Draws up to `batch` distinct pairs per call via a partial Fisher-Yates pass
// over a persistent permutation.
class PairSampler {
 public:
  PairSampler(std::vector<std::pair<int, int>> all, std::uint64_t seed)
      : all_(std::move(all)), rng_(derive_seed(seed, 0x70a1)) {}

  std::span<const std::pair<int, int>> draw(std::size_t batch) {
    const std::size_t take = std::min(batch, all_.size());
    for (std::size_t i = 0; i < take; ++i) {
      const auto j = static_cast<std::size_t>(
          rng_.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(all_.size()) - 1));
      std::swap(all_[i], all_[j]);
    }
    return {all_.data(), take};
  }

  bool empty() const noexcept { return all_.empty(); }

 private:
  std::vector<std::pair<int, int>> all_;
  Rng rng_;
};

class Runner {
 public:
  Runner(const Graph& g, Layout start, const DescentConfig& cfg, const DescentInputs& in, bool needs_stress,
         bool needs_aesthete)
      : g_(g), cfg_(cfg), in_(in), layout_(std::move(start)), sampler_({}, cfg.seed) {
    cfg.validate();
    if (layout_.rows() != static_cast<std::size_t>(g.node_count()) || layout_.cols() != 2) {
      throw ShapeError("descent: start layout " + layout_.shape_string() + " for " +
                       std::to_string(g.node_count()) + " nodes");
    }
    if (needs_stress) {
      if (in.distances == nullptr) throw std::invalid_argument("descent: stress requires a distance matrix");
      if (in.distances->size() != g.node_count()) {
        throw std::invalid_argument("descent: distance matrix does not match the graph");
      }
      terms_ = make_stress_terms(*in.distances, cfg.stress);
    }
    if (needs_aesthete) {
      if (in.aesthete == nullptr || in.aesthete->empty()) {
        throw std::invalid_argument("descent: aesthete loss requires a trained model");
      }
      sampler_ = PairSampler(disjoint_edge_pairs(g), cfg.seed);
    }
    adam_.config.learning_rate = cfg.learning_rate;
  }

  void step(int s, StepKind kind) {
    ad::Tape tape;
    ad::Tensor p = tape.variable(layout_);
    ad::Tensor loss;
    switch (kind) {
      case StepKind::Stress:
        loss = stress(p, terms_);
        break;
      case StepKind::Aesthete:
        loss = aesthete_loss(*in_.aesthete, p, g_, sampler_.draw(cfg_.pair_batch), cfg_.normalize_pairs);
        break;
      case StepKind::Combined: {
        // Pairs are drawn even when lambda is zero so the sampler stream does
        // not depend on lambda.
        const auto pairs = sampler_.draw(cfg_.pair_batch);
        loss = combined_loss(p, terms_, *in_.aesthete, g_, pairs, cfg_.lambda, cfg_.normalize_pairs);
        break;
      }
    }
    const double value = loss.item();
    if (!std::isfinite(value)) {
      throw DivergenceError("descent: non-finite loss at step " + std::to_string(s), trace_);
    }
    trace_.push_back(value);
    tape.backward(loss);
    const Matrix& grad = p.grad();
    const double lr = cfg_.learning_rate * std::pow(cfg_.decay, static_cast<double>(s));
    if (cfg_.optimizer == Optimizer::Adam) {
      adam_.config.learning_rate = lr;
      adam_step(layout_, grad, adam_);
    } else {
      for (std::size_t i = 0; i < layout_.size(); ++i) layout_[i] -= lr * grad[i];
    }
  }

  DescentResult finish() { return {std::move(layout_), std::move(trace_)}; }

 private:
  const Graph& g_;
  const DescentConfig& cfg_;
  DescentInputs in_;
  Layout layout_;
  StressTerms terms_;
  PairSampler sampler_;
  AdamState adam_;
  std::vector<double> trace_;
};

}  // namespace

DescentResult optimize_layout(const Graph& g, LayoutLoss loss, const DescentConfig& cfg, const DescentInputs& in) {
  return optimize_layout(g, loss, init_layout(g, cfg.seed), cfg, in);
}

DescentResult optimize_layout(const Graph& g, LayoutLoss loss, Layout start, const DescentConfig& cfg,
                              const DescentInputs& in) {
  const bool needs_stress = loss != LayoutLoss::Aesthete;
  const bool needs_aesthete = loss != LayoutLoss::Stress;
  if (loss == LayoutLoss::Combined && !cfg.stress.averaged) {
    throw std::invalid_argument("descent: combined loss uses averaged stress");
  }
  Runner runner(g, std::move(start), cfg, in, needs_stress, needs_aesthete);
  const StepKind kind = loss == LayoutLoss::Stress     ? StepKind::Stress
                        : loss == LayoutLoss::Aesthete ? StepKind::Aesthete
                                                       : StepKind::Combined;
  for (int s = 0; s < cfg.steps; ++s) runner.step(s, kind);
  return runner.finish();
}

DescentResult alternating_optimize(const Graph& g, const DescentConfig& cfg, const DescentInputs& in) {
  return alternating_optimize(g, init_layout(g, cfg.seed), cfg, in);
}

DescentResult alternating_optimize(const Graph& g, Layout start, const DescentConfig& cfg, const DescentInputs& in) {
  Runner runner(g, std::move(start), cfg, in, true, true);
  for (int s = 0; s < cfg.steps; ++s) {
    // s is zero-based: step s + 1 is odd for even s.
    runner.step(s, s % 2 == 0 ? StepKind::Stress : StepKind::Aesthete);
  }
  return runner.finish();
}

Layout circular_layout(int node_count, double radius) {
  if (node_count < 0) throw std::invalid_argument("circular_layout: negative node count");
  Layout p(static_cast<std::size_t>(node_count), 2);
  for (int i = 0; i < node_count; ++i) {
    const double theta = 2.0 * std::numbers::pi * i / node_count;
    p(i, 0) = radius * std::cos(theta);
    p(i, 1) = radius * std::sin(theta);
  }
  return p;
}

Layout kamada_kawai_target(const Graph& g, int max_steps, double tolerance) {
  const int n = g.node_count();
  if (n < 2) return Layout(static_cast<std::size_t>(n), 2);
  const DistanceMatrix d = bfs_all_pairs(g);
  const StressTerms terms = make_stress_terms(d, {.alpha = 2, .averaged = true});
  Layout p = circular_layout(n, std::max(1.0, d.diameter() / 2.0));
  AdamState adam(AdamConfig{.learning_rate = 0.05});
  double previous = 0.0;
  for (int s = 0; s < max_steps; ++s) {
    ad::Tape tape;
    ad::Tensor x = tape.variable(p);
    ad::Tensor loss = stress(x, terms);
    const double value = loss.item();
    if (s > 0 && std::abs(previous - value) <= tolerance * std::max(value, 1e-300)) break;
    previous = value;
    tape.backward(loss);
    adam_step(p, x.grad(), adam);
  }
  return p;
}

}  // namespace nd
