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

#include "neural_drawer/training.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "neural_drawer/adam.hpp"
#include "neural_drawer/descent.hpp"
#include "neural_drawer/errors.hpp"
#include "neural_drawer/parallel.hpp"
#include "neural_drawer/rng.hpp"
#include "neural_drawer/spectral.hpp"

namespace nd {

std::string_view task_name(TaskKind t) {
  switch (t) {
    case TaskKind::Supervised:
      return "supervised";
    case TaskKind::Stress:
      return "stress";
    case TaskKind::AestheteGuided:
      return "aesthete-guided";
  }
  return "unknown";
}

std::optional<TaskKind> parse_task(std::string_view name) {
  for (TaskKind t : {TaskKind::Supervised, TaskKind::Stress, TaskKind::AestheteGuided}) {
    if (task_name(t) == name) return t;
  }
  return std::nullopt;
}

std::string_view target_name(TargetKind t) { return t == TargetKind::Spectral ? "spectral" : "kamada-kawai"; }

std::optional<TargetKind> parse_target(std::string_view name) {
  if (name == "spectral") return TargetKind::Spectral;
  if (name == "kamada-kawai" || name == "kk") return TargetKind::KamadaKawai;
  return std::nullopt;
}

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::Procrustes:
      return "procrustes";
    case Metric::AveragedStress:
      return "avg-stress";
    case Metric::Crossings:
      return "crossings";
  }
  return "unknown";
}

std::optional<Metric> parse_metric(std::string_view name) {
  for (Metric m : {Metric::Procrustes, Metric::AveragedStress, Metric::Crossings}) {
    if (metric_name(m) == name) return m;
  }
  return std::nullopt;
}

void TrainRunConfig::validate() const {
  model.validate();
  if (!(learning_rate > 0.0)) throw std::invalid_argument("train: learning rate must be positive");
  if (batch_graphs < 1) throw std::invalid_argument("train: batch size must be positive");
  if (epochs < 1) throw std::invalid_argument("train: epochs must be positive");
  if (patience < 1 || patience > epochs) throw std::invalid_argument("train: patience must be in [1, epochs]");
  if (!(lambda >= 0.0)) throw std::invalid_argument("train: lambda must be non-negative");
}

PreparedSamples prepare_samples(const GraphDataset& dataset, std::span<const std::size_t> indices,
                                const TrainRunConfig& cfg) {
  const bool supervised = cfg.task == TaskKind::Supervised;
  const int min_nodes = supervised ? (cfg.target == TargetKind::Spectral ? 3 : 2) : 1;
  std::vector<std::optional<GraphSample>> built(indices.size());
  parallel_for(indices.size(), [&](std::size_t i) {
    const std::size_t idx = indices[i];
    if (idx >= dataset.graphs.size()) throw std::out_of_range("prepare_samples: index out of range");
    const Graph& g = dataset.graphs[idx];
    if (g.node_count() < min_nodes) return;
    GraphSample s;
    s.dataset_index = idx;
    s.graph = g;
    s.context = make_context(g);
    if (cfg.model.features == FeatureMode::LaplacianPE) {
      s.pe = make_features(g, FeatureMode::LaplacianPE, cfg.model.input_dim, nullptr, cfg.pad_small_graphs);
    }
    s.distances = bfs_all_pairs(g);
    s.stress_terms = make_stress_terms(s.distances, StressConfig{});
    if (supervised) {
      s.target = cfg.target == TargetKind::Spectral ? spectral_layout(g) : kamada_kawai_target(g);
    }
    if (cfg.task == TaskKind::AestheteGuided) s.disjoint_pairs = disjoint_edge_pairs(g);
    built[i] = std::move(s);
  });
  PreparedSamples out;
  for (std::size_t i = 0; i < built.size(); ++i) {
    if (built[i]) {
      out.samples.push_back(std::move(*built[i]));
    } else {
      out.skipped.push_back(indices[i]);
    }
  }
  return out;
}

namespace {

constexpr std::uint64_t kModelStream = 0x6d6f64656cULL;
constexpr std::uint64_t kEvalStream = 0x6576616cULL;

double centred_norm(const Matrix& p) {
  double total = 0.0;
  for (std::size_t c = 0; c < p.cols(); ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < p.rows(); ++r) mean += p(r, c);
    mean /= static_cast<double>(p.rows());
    for (std::size_t r = 0; r < p.rows(); ++r) total += (p(r, c) - mean) * (p(r, c) - mean);
  }
  return total;
}

ad::Tensor features_for(ad::Tape& tape, const GndModel& model, const GraphSample& s, Rng& rng) {
  if (model.spec().features == FeatureMode::RandomUniform) {
    return tape.constant(make_features(s.graph, FeatureMode::RandomUniform, model.spec().input_dim, &rng));
  }
  if (s.pe.rows() != static_cast<std::size_t>(s.graph.node_count()) || s.pe.cols() != model.spec().input_dim) {
    throw ShapeError("train: sample PE does not match the model input dimension");
  }
  return tape.constant(s.pe);
}

// Loss of one graph on its own tape.
ad::Tensor graph_loss(ad::Tape& tape, const GndModel& model, const GraphSample& s, const TrainRunConfig& cfg,
                      const AestheteModel* aesthete, bool training, Rng& feature_rng, Rng& dropout_rng) {
  ad::Tensor x = features_for(tape, model, s, feature_rng);
  ad::Tensor pred = model.forward(tape, s.context, x, training, &dropout_rng);
  switch (cfg.task) {
    case TaskKind::Supervised: {
      if (!s.target) throw std::invalid_argument("train: supervised task requires target layouts");
      // A collapsed prediction carries no shape; score it as maximally
      // dissimilar.
      if (centred_norm(pred.value()) <= 1e-24) {
        Matrix one(1, 1, 1.0);
        return tape.constant(one);
      }
      return procrustes(pred, tape.constant(*s.target));
    }
    case TaskKind::Stress:
      return stress(pred, s.stress_terms);
    case TaskKind::AestheteGuided: {
      if (aesthete == nullptr || aesthete->empty()) {
        throw std::invalid_argument("train: aesthete-guided task requires a trained aesthete model");
      }
      std::span<const std::pair<int, int>> pairs = s.disjoint_pairs;
      std::vector<std::pair<int, int>> sampled;
      if (cfg.aesthete_pairs > 0 && cfg.aesthete_pairs < pairs.size()) {
        sampled.assign(pairs.begin(), pairs.end());
        for (std::size_t i = 0; i < cfg.aesthete_pairs; ++i) {
          const auto j = static_cast<std::size_t>(
              feature_rng.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(sampled.size()) - 1));
          std::swap(sampled[i], sampled[j]);
        }
        sampled.resize(cfg.aesthete_pairs);
        pairs = sampled;
      }
      return combined_loss(pred, s.stress_terms, *aesthete, s.graph, pairs, cfg.lambda);
    }
  }
  throw std::logic_error("train: unknown task");
}

std::uint64_t eval_seed(std::uint64_t seed, std::size_t index) {
  return derive_seed(derive_seed(seed, kEvalStream), index);
}

double mean_val_loss(const GndModel& model, std::span<const GraphSample> val, const TrainRunConfig& cfg,
                     const AestheteModel* aesthete) {
  std::vector<double> losses(val.size());
  parallel_for(val.size(), [&](std::size_t i) { losses[i] = sample_loss(model, val[i], cfg, aesthete); });
  double total = 0.0;
  for (double l : losses) total += l;  // fixed order
  return total / static_cast<double>(val.size());
}

}  // namespace

double sample_loss(const GndModel& model, const GraphSample& sample, const TrainRunConfig& cfg,
                   const AestheteModel* aesthete) {
  ad::Tape tape;
  Rng rng(eval_seed(cfg.seed, sample.dataset_index));
  Rng unused(0);
  return graph_loss(tape, model, sample, cfg, aesthete, false, rng, unused).item();
}

TrainResult train(std::span<const GraphSample> train_set, std::span<const GraphSample> val_set,
                  const TrainRunConfig& cfg, const AestheteModel* aesthete) {
  cfg.validate();
  if (train_set.empty()) throw std::invalid_argument("train: empty training split");
  if (val_set.empty()) throw std::invalid_argument("train: empty validation split");
  if (cfg.task == TaskKind::AestheteGuided && (aesthete == nullptr || aesthete->empty())) {
    throw std::invalid_argument("train: aesthete-guided task requires a trained aesthete model");
  }

  TrainResult result;
  GndModel model(cfg.model, derive_seed(cfg.seed, kModelStream));
  const std::size_t param_count = model.parameters().size();
  AdamState adam(AdamConfig{.learning_rate = cfg.learning_rate});
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::vector<ad::Parameter> best_params(model.parameters().begin(), model.parameters().end());
  double best = std::numeric_limits<double>::infinity();
  int since_best = 0;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const std::uint64_t epoch_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(epoch));
    Rng shuffle_rng(epoch_seed);
    shuffle_rng.shuffle(std::span<std::size_t>(order));
    double epoch_total = 0.0;

    for (std::size_t start = 0; start < order.size(); start += cfg.batch_graphs) {
      const std::size_t batch = std::min(cfg.batch_graphs, order.size() - start);
      std::vector<std::vector<Matrix>> grads(batch);
      std::vector<double> losses(batch);
      parallel_for(batch, [&](std::size_t b) {
        const GraphSample& s = train_set[order[start + b]];
        Rng feature_rng(derive_seed(epoch_seed, 2 * s.dataset_index + 2));
        Rng dropout_rng(derive_seed(epoch_seed, 2 * s.dataset_index + 3));
        ad::Tape tape;
        ad::Tensor loss = graph_loss(tape, model, s, cfg, aesthete, true, feature_rng, dropout_rng);
        losses[b] = loss.item();
        if (!std::isfinite(losses[b])) return;
        tape.backward(loss);
        grads[b].reserve(param_count);
        for (const ad::Parameter& p : model.parameters()) grads[b].push_back(tape.parameter_gradient(p));
      });
      for (double l : losses) {
        if (!std::isfinite(l)) {
          std::vector<double> trace;
          for (const auto& h : result.history) trace.push_back(h.val_loss);
          throw DivergenceError("train: non-finite loss at epoch " + std::to_string(epoch), trace);
        }
        epoch_total += l;
      }
      const double inv = 1.0 / static_cast<double>(batch);
      for (std::size_t p = 0; p < param_count; ++p) {
        ad::Parameter& param = model.parameters()[p];
        param.zero_grad();
        for (std::size_t b = 0; b < batch; ++b) {
          const Matrix& g = grads[b][p];
          for (std::size_t i = 0; i < g.size(); ++i) param.grad[i] += g[i];
        }
        for (double& v : param.grad.values()) v *= inv;
      }
      adam_step(model.parameters(), adam);
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = epoch_total / static_cast<double>(train_set.size());
    rec.val_loss = mean_val_loss(model, val_set, cfg, aesthete);
    if (!std::isfinite(rec.val_loss)) {
      std::vector<double> trace;
      for (const auto& h : result.history) trace.push_back(h.val_loss);
      throw DivergenceError("train: non-finite validation loss at epoch " + std::to_string(epoch), trace);
    }
    result.history.push_back(rec);
    if (rec.val_loss < best) {
      best = rec.val_loss;
      result.best_epoch = epoch;
      std::copy(model.parameters().begin(), model.parameters().end(), best_params.begin());
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      break;
    }
  }

  std::copy(best_params.begin(), best_params.end(), model.parameters().begin());
  for (ad::Parameter& p : model.parameters()) p.zero_grad();
  result.model = std::move(model);
  result.best_val_loss = best;
  return result;
}

TrainResult mlp_baseline_train(std::span<const GraphSample> train_set, std::span<const GraphSample> val_set,
                               TrainRunConfig cfg, const AestheteModel* aesthete) {
  cfg.model.kind = Aggregator::MLP;
  return train(train_set, val_set, cfg, aesthete);
}

Layout predict_layout(const GndModel& model, const GraphSample& sample, std::uint64_t seed) {
  ad::Tape tape;
  Rng rng(eval_seed(seed, sample.dataset_index));
  ad::Tensor x = features_for(tape, model, sample, rng);
  return model.forward(tape, sample.context, x, false, nullptr).value();
}

Evaluation evaluate(const GndModel& model, std::span<const GraphSample> samples, Metric metric, std::uint64_t seed) {
  if (samples.empty()) throw std::invalid_argument("evaluate: empty split");
  Evaluation out;
  out.per_graph.resize(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    const GraphSample& s = samples[i];
    const Layout p = predict_layout(model, s, seed);
    switch (metric) {
      case Metric::Procrustes:
        if (!s.target) throw std::invalid_argument("evaluate: procrustes metric requires target layouts");
        out.per_graph[i] = centred_norm(p) <= 1e-24 ? 1.0 : procrustes_value(p, *s.target);
        break;
      case Metric::AveragedStress:
        out.per_graph[i] = stress_value(p, s.distances);
        break;
      case Metric::Crossings:
        out.per_graph[i] = count_crossings(p, s.graph);
        break;
    }
  });
  double total = 0.0;
  for (double v : out.per_graph) total += v;
  out.mean = total / static_cast<double>(samples.size());
  return out;
}

}  // namespace nd
