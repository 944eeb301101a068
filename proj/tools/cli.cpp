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

#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "gradcheck_suite.hpp"
#include "neural_drawer/aesthete.hpp"
#include "neural_drawer/descent.hpp"
#include "neural_drawer/errors.hpp"
#include "neural_drawer/gnd.hpp"
#include "neural_drawer/graph.hpp"
#include "neural_drawer/losses.hpp"
#include "neural_drawer/serialization.hpp"
#include "neural_drawer/spectral.hpp"
#include "neural_drawer/svg.hpp"
#include "neural_drawer/training.hpp"

namespace nd::cli {

namespace fs = std::filesystem;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Every option of a subcommand with its effective value, for manifests.
std::map<std::string, std::string> option_values(const CLI::App& app) {
  std::map<std::string, std::string> out;
  for (const CLI::Option* opt : app.get_options()) {
    if (opt == app.get_help_ptr() || opt == app.get_help_all_ptr()) continue;
    if (opt->get_lnames().empty()) continue;
    const std::string key = opt->get_lnames().front();
    if (key == "config") continue;
    if (opt->count() > 0) {
      std::string joined;
      for (const auto& r : opt->results()) joined += (joined.empty() ? "" : ",") + r;
      out[key] = joined;
    } else {
      out[key] = opt->get_default_str();
    }
  }
  return out;
}

// ---- gen-dataset ----

struct GenArgs {
  std::string kind = "sparse";
  std::size_t count = 0;
  std::uint64_t seed = 0;
  std::string out;
};

int gen_dataset(const GenArgs& a, std::ostream& out) {
  if (a.kind != "sparse") throw UsageError("gen-dataset: unsupported --kind '" + a.kind + "' (expected sparse)");
  if (a.count == 0) throw UsageError("gen-dataset: --count must be at least 1");
  const GraphDataset ds = build_sparse_dataset(a.count, a.seed);
  write_dataset(a.out, ds);
  out << "wrote " << ds.graphs.size() << " graphs to " << a.out << " (fingerprint " << hex16(dataset_fingerprint(ds))
      << ")\n";
  return kExitOk;
}

// ---- train-aesthete ----

struct AestheteArgs {
  std::size_t train_size = 100000;
  std::size_t test_size = 50000;
  AestheteTrainConfig cfg;
  std::string out;
  std::string history;
  std::string manifest;
};

int train_aesthete_cmd(const AestheteArgs& a, const CLI::App& app, std::ostream& out) {
  const auto train_set = build_crossing_dataset(a.train_size, derive_seed(a.cfg.seed, 1));
  const auto test_set = build_crossing_dataset(a.test_size, derive_seed(a.cfg.seed, 2));
  AestheteTrainReport report;
  const AestheteModel model = train_aesthete(train_set, a.cfg, &report);
  write_file(a.out, encode_aesthete_checkpoint(model, a.cfg.seed));

  std::string csv = "epoch,train_loss,train_accuracy\n";
  for (std::size_t e = 0; e < report.epoch_loss.size(); ++e) {
    char line[96];
    std::snprintf(line, sizeof line, "%zu,%.17g,%.17g\n", e + 1, report.epoch_loss[e], report.epoch_accuracy[e]);
    csv += line;
  }
  write_file(a.history.empty() ? a.out + ".history.csv" : a.history, csv);

  RunManifest m;
  m.command = "train-aesthete";
  m.config = option_values(app);
  m.seeds = {a.cfg.seed};
  m.metrics["test_accuracy"] = aesthete_accuracy(model, test_set);
  m.metrics["final_train_loss"] = report.epoch_loss.empty() ? 0.0 : report.epoch_loss.back();
  const std::string json = m.to_json();
  write_file(a.manifest.empty() ? a.out + ".manifest.json" : a.manifest, json + "\n");
  out << json << "\n";
  return kExitOk;
}

// ---- train-gnd ----

struct GndArgs {
  std::string dataset;
  std::string model = "gat";
  std::string task = "supervised";
  std::string target = "spectral";
  std::string features = "laplacian-pe";
  TrainRunConfig cfg;
  std::string aesthete;
  std::string out;
  std::string history;
  std::string manifest;
};

TrainRunConfig resolve_train_config(const GndArgs& a, const CLI::App& app) {
  TrainRunConfig cfg = a.cfg;
  // The default patience only bounds runs long enough to use it.
  if (app.get_option("--patience")->count() == 0) cfg.patience = std::min(cfg.patience, cfg.epochs);
  const auto kind = parse_aggregator(a.model);
  const auto task = parse_task(a.task);
  const auto target = parse_target(a.target);
  const auto features = parse_feature_mode(a.features);
  if (!kind) throw UsageError("train-gnd: unknown --model '" + a.model + "'");
  if (!task) throw UsageError("train-gnd: unknown --task '" + a.task + "'");
  if (!target) throw UsageError("train-gnd: unknown --target '" + a.target + "'");
  if (!features) throw UsageError("train-gnd: unknown --features '" + a.features + "'");
  cfg.model.kind = *kind;
  cfg.task = *task;
  cfg.target = *target;
  cfg.model.features = *features;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

int train_gnd_cmd(const GndArgs& a, const CLI::App& app, std::ostream& out, std::ostream& err) {
  const TrainRunConfig cfg = resolve_train_config(a, app);
  std::optional<AestheteModel> aesthete;
  if (cfg.task == TaskKind::AestheteGuided) {
    if (a.aesthete.empty()) throw UsageError("train-gnd: task aesthete-guided requires --aesthete <checkpoint>");
    aesthete = decode_aesthete_checkpoint(read_file(a.aesthete));
  }
  const GraphDataset ds = read_dataset(a.dataset);
  const auto train_idx = ds.indices(Split::Train);
  const auto val_idx = ds.indices(Split::Validation);
  const auto test_idx = ds.indices(Split::Test);
  const PreparedSamples train_set = prepare_samples(ds, train_idx, cfg);
  const PreparedSamples val_set = prepare_samples(ds, val_idx, cfg);
  const PreparedSamples test_set = prepare_samples(ds, test_idx, cfg);

  TrainResult result;
  try {
    result = train(train_set.samples, val_set.samples, cfg, aesthete ? &*aesthete : nullptr);
  } catch (const DivergenceError& e) {
    err << "train-gnd: " << e.what() << "\n";
    return kExitDiverged;
  }
  write_file(a.out, encode_gnd_checkpoint(result.model, &cfg));
  write_file(a.history.empty() ? a.out + ".history.csv" : a.history, history_csv(result.history));

  RunManifest m;
  m.command = "train-gnd";
  m.config = option_values(app);
  m.seeds = {cfg.seed};
  m.dataset_fingerprint = hex16(dataset_fingerprint(ds));
  m.metrics["best_epoch"] = result.best_epoch;
  m.metrics["best_val_loss"] = result.best_val_loss;
  m.metrics["skipped_graphs"] =
      static_cast<double>(train_set.skipped.size() + val_set.skipped.size() + test_set.skipped.size());
  if (!test_set.samples.empty()) {
    if (cfg.task == TaskKind::Supervised) {
      m.metrics["test_procrustes"] = evaluate(result.model, test_set.samples, Metric::Procrustes, cfg.seed).mean;
    }
    m.metrics["test_avg_stress"] = evaluate(result.model, test_set.samples, Metric::AveragedStress, cfg.seed).mean;
    m.metrics["test_crossings"] = evaluate(result.model, test_set.samples, Metric::Crossings, cfg.seed).mean;
  }
  const std::string json = m.to_json();
  write_file(a.manifest.empty() ? a.out + ".manifest.json" : a.manifest, json + "\n");
  out << json << "\n";
  return kExitOk;
}

// ---- draw ----

struct DrawArgs {
  std::string graph;
  std::string method;
  DescentConfig descent;
  std::string optimizer = "gd";
  std::string aesthete;
  std::string out;
  std::string svg;
  std::string trace;
};

int draw_cmd(DrawArgs a, const CLI::App& app, std::ostream& out) {
  const LoadedGraph loaded = load_edge_list(read_file(a.graph));
  const Graph& g = loaded.graph;
  if (a.optimizer == "adam") {
    a.descent.optimizer = Optimizer::Adam;
  } else if (a.optimizer != "gd") {
    throw UsageError("draw: unknown --optimizer '" + a.optimizer + "' (expected gd or adam)");
  }
  try {
    a.descent.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const DistanceMatrix d = bfs_all_pairs(g);
  std::optional<AestheteModel> aesthete;
  auto need_aesthete = [&] {
    if (a.aesthete.empty()) throw UsageError("draw: method " + a.method + " requires --aesthete <checkpoint>");
    aesthete = decode_aesthete_checkpoint(read_file(a.aesthete));
  };

  Layout layout;
  std::vector<double> trace;
  const DescentInputs inputs{&d, nullptr};
  if (a.method == "spectral") {
    layout = spectral_layout(g);
  } else if (a.method == "descent-stress") {
    auto r = optimize_layout(g, LayoutLoss::Stress, a.descent, inputs);
    layout = std::move(r.layout);
    trace = std::move(r.trace);
  } else if (a.method == "descent-aesthete" || a.method == "descent-combined" || a.method == "descent-alternating") {
    need_aesthete();
    const DescentInputs in{&d, &*aesthete};
    DescentResult r = a.method == "descent-alternating"
                          ? alternating_optimize(g, a.descent, in)
                          : optimize_layout(g, a.method == "descent-aesthete" ? LayoutLoss::Aesthete : LayoutLoss::Combined,
                                            a.descent, in);
    layout = std::move(r.layout);
    trace = std::move(r.trace);
  } else if (a.method.rfind("gnd:", 0) == 0) {
    const LoadedGnd ckpt = decode_gnd_checkpoint(read_file(a.method.substr(4)));
    const GndSpec& spec = ckpt.model.spec();
    Rng rng(a.descent.seed);
    Matrix features;
    if (spec.features == FeatureMode::LaplacianPE && spec.input_dim >= static_cast<std::size_t>(g.node_count())) {
      throw std::invalid_argument("draw: checkpoint PE dimension k=" + std::to_string(spec.input_dim) +
                                  " requires a graph with more than k nodes, but the graph has " +
                                  std::to_string(g.node_count()) + "; use a model with smaller k or a larger graph");
    }
    features = make_features(g, spec.features, spec.input_dim, &rng);
    layout = ckpt.model.predict(make_context(g), features);
  } else {
    throw UsageError("draw: unknown --method '" + a.method + "'");
  }

  RunManifest m;
  m.command = "draw";
  m.config = option_values(app);
  m.seeds = {a.descent.seed};
  m.dataset_fingerprint = hex16(fingerprint(g));
  const double avg_stress = stress_value(layout, d);
  const int crossings = count_crossings(layout, g);
  m.metrics["avg_stress"] = avg_stress;
  m.metrics["crossings"] = crossings;
  m.metrics["dropped_nodes"] = loaded.dropped_nodes ? 1.0 : 0.0;
  const std::string json = layout_json(layout, avg_stress, crossings, m);
  if (a.out.empty()) {
    out << json;
  } else {
    write_file(a.out, json);
  }
  if (!a.svg.empty()) write_file(a.svg, render_svg(layout, g));
  if (!a.trace.empty()) write_file(a.trace, trace_csv(trace));
  return kExitOk;
}

// ---- evaluate ----

struct EvalArgs {
  std::string dataset;
  std::string checkpoint;
  std::string metric = "procrustes";
  std::string split = "test";
  std::string target = "spectral";
  std::uint64_t seed = 0;
};

int evaluate_cmd(const EvalArgs& a, std::ostream& out) {
  const auto metric = parse_metric(a.metric);
  if (!metric) throw UsageError("evaluate: unknown --metric '" + a.metric + "'");
  const auto target = parse_target(a.target);
  if (!target) throw UsageError("evaluate: unknown --target '" + a.target + "'");
  std::optional<Split> split;
  for (Split s : {Split::Train, Split::Validation, Split::Test}) {
    if (split_name(s) == a.split) split = s;
  }
  if (!split) throw UsageError("evaluate: unknown --split '" + a.split + "'");
  const LoadedGnd ckpt = decode_gnd_checkpoint(read_file(a.checkpoint));
  const GraphDataset ds = read_dataset(a.dataset);
  TrainRunConfig cfg;
  cfg.model = ckpt.model.spec();
  cfg.task = *metric == Metric::Procrustes ? TaskKind::Supervised : TaskKind::Stress;
  cfg.target = *target;
  const auto idx = ds.indices(*split);
  const PreparedSamples samples = prepare_samples(ds, idx, cfg);
  if (samples.samples.empty()) throw std::invalid_argument("evaluate: no graphs in split " + a.split);
  const Evaluation ev = evaluate(ckpt.model, samples.samples, *metric, a.seed);
  std::ostringstream json;
  json.precision(17);
  json << "{\"metric\":\"" << metric_name(*metric) << "\",\"split\":\"" << a.split << "\",\"mean\":" << ev.mean
       << ",\"per_graph\":[";
  for (std::size_t i = 0; i < ev.per_graph.size(); ++i) {
    json << (i ? "," : "") << "{\"index\":" << samples.samples[i].dataset_index << ",\"value\":" << ev.per_graph[i]
         << "}";
  }
  json << "],\"skipped\":[";
  for (std::size_t i = 0; i < samples.skipped.size(); ++i) json << (i ? "," : "") << samples.skipped[i];
  json << "]}\n";
  out << json.str();
  return kExitOk;
}

// ---- gradcheck ----

int gradcheck_cmd(std::uint64_t seed, std::ostream& out) {
  int failures = 0;
  for (const auto& c : run_gradcheck_suite(seed)) {
    char line[160];
    std::snprintf(line, sizeof line, "%s %-36s rel_err=%.3e\n", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                  c.relative_error);
    out << line;
    failures += c.passed ? 0 : 1;
  }
  out << (failures == 0 ? "all gradient checks passed\n" : std::to_string(failures) + " gradient checks failed\n");
  return failures == 0 ? kExitOk : kExitFailure;
}

}  // namespace

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::vector<std::string> files;
  std::set<std::string> given;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config requires a file");
      files.push_back(args[++i]);
      continue;
    }
    if (a.rfind("--config=", 0) == 0) {
      files.push_back(a.substr(9));
      continue;
    }
    if (a.rfind("--", 0) == 0 && a.size() > 2) given.insert(a.substr(2, a.find('=') - 2));
    rest.push_back(a);
  }
  for (const auto& f : files) {
    std::map<std::string, std::string> kv;
    try {
      kv = parse_config(read_file(f));
    } catch (const ParseError& e) {
      throw UsageError("config " + f + ": " + e.what());
    } catch (const IoError& e) {
      throw UsageError(e.what());
    }
    for (const auto& [k, v] : kv) {
      if (given.insert(k).second) rest.push_back("--" + k + "=" + v);
    }
  }
  return rest;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"neural_drawer: graph drawing with neural aesthetes and graph neural drawers"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-dataset", "Generate a seeded synthetic graph dataset");
  gen_cmd->add_option("--kind", gen.kind, "Dataset recipe (sparse)");
  gen_cmd->add_option("--count", gen.count, "Number of graphs")->required();
  gen_cmd->add_option("--seed", gen.seed, "Generator seed");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();

  AestheteArgs aes;
  auto* aes_cmd = app.add_subcommand("train-aesthete", "Train the edge-crossing aesthete");
  aes_cmd->add_option("--train-size", aes.train_size, "Balanced training pairs");
  aes_cmd->add_option("--test-size", aes.test_size, "Balanced test pairs (disjoint seed)");
  aes_cmd->add_option("--epochs", aes.cfg.epochs);
  aes_cmd->add_option("--batch", aes.cfg.batch_size);
  aes_cmd->add_option("--lr", aes.cfg.learning_rate);
  aes_cmd->add_option("--seed", aes.cfg.seed);
  aes_cmd->add_option("--out", aes.out, "Checkpoint path")->required();
  aes_cmd->add_option("--history", aes.history, "Per-epoch CSV (default <out>.history.csv)");
  aes_cmd->add_option("--manifest", aes.manifest, "Manifest JSON (default <out>.manifest.json)");

  GndArgs gnd;
  auto* gnd_cmd = app.add_subcommand("train-gnd", "Train a graph neural drawer");
  gnd_cmd->add_option("--dataset", gnd.dataset, "Dataset directory")->required();
  gnd_cmd->add_option("--model", gnd.model, "gcn | gat | gin | mlp");
  gnd_cmd->add_option("--task", gnd.task, "supervised | stress | aesthete-guided");
  gnd_cmd->add_option("--target", gnd.target, "spectral | kamada-kawai (supervised task)");
  gnd_cmd->add_option("--features", gnd.features, "laplacian-pe | random-uniform");
  gnd_cmd->add_option("--hidden", gnd.cfg.model.hidden);
  gnd_cmd->add_option("--layers", gnd.cfg.model.layers);
  gnd_cmd->add_option("--heads", gnd.cfg.model.heads);
  gnd_cmd->add_option("--k", gnd.cfg.model.input_dim, "PE / feature dimension");
  gnd_cmd->add_option("--dropout", gnd.cfg.model.dropout);
  gnd_cmd->add_option("--gin-epsilon", gnd.cfg.model.gin_epsilon);
  gnd_cmd->add_option("--lr", gnd.cfg.learning_rate);
  gnd_cmd->add_option("--batch", gnd.cfg.batch_graphs, "Graphs per mini-batch");
  gnd_cmd->add_option("--epochs", gnd.cfg.epochs);
  gnd_cmd->add_option("--patience", gnd.cfg.patience);
  gnd_cmd->add_option("--lambda", gnd.cfg.lambda);
  gnd_cmd->add_option("--aesthete-pairs", gnd.cfg.aesthete_pairs, "Edge pairs per graph, 0 = all");
  gnd_cmd->add_option("--seed", gnd.cfg.seed);
  gnd_cmd->add_option("--aesthete", gnd.aesthete, "Aesthete checkpoint");
  gnd_cmd->add_option("--out", gnd.out, "Checkpoint path")->required();
  gnd_cmd->add_option("--history", gnd.history, "History CSV (default <out>.history.csv)");
  gnd_cmd->add_option("--manifest", gnd.manifest, "Manifest JSON (default <out>.manifest.json)");

  DrawArgs draw;
  auto* draw_sub = app.add_subcommand("draw", "Lay out one graph");
  draw_sub->add_option("--graph", draw.graph, "Edge-list file")->required();
  draw_sub->add_option("--method", draw.method,
                       "spectral | descent-stress | descent-aesthete | descent-combined | descent-alternating | "
                       "gnd:<checkpoint>")
      ->required();
  draw_sub->add_option("--seed", draw.descent.seed);
  draw_sub->add_option("--steps", draw.descent.steps);
  draw_sub->add_option("--lr", draw.descent.learning_rate);
  draw_sub->add_option("--optimizer", draw.optimizer, "gd | adam");
  draw_sub->add_option("--pair-batch", draw.descent.pair_batch);
  draw_sub->add_option("--decay", draw.descent.decay);
  draw_sub->add_option("--lambda", draw.descent.lambda);
  draw_sub->add_option("--aesthete", draw.aesthete, "Aesthete checkpoint");
  draw_sub->add_option("--out", draw.out, "Layout JSON path (default stdout)");
  draw_sub->add_option("--svg", draw.svg, "SVG output path");
  draw_sub->add_option("--trace", draw.trace, "Loss trace CSV path");

  EvalArgs ev;
  auto* eval_sub = app.add_subcommand("evaluate", "Evaluate a trained drawer on a dataset split");
  eval_sub->add_option("--dataset", ev.dataset)->required();
  eval_sub->add_option("--checkpoint", ev.checkpoint)->required();
  eval_sub->add_option("--metric", ev.metric, "procrustes | avg-stress | crossings");
  eval_sub->add_option("--split", ev.split, "train | val | test");
  eval_sub->add_option("--target", ev.target, "spectral | kamada-kawai");
  eval_sub->add_option("--seed", ev.seed);

  std::uint64_t grad_seed = 1;
  auto* grad_sub = app.add_subcommand("gradcheck", "Run the finite-difference gradient suite");
  grad_sub->add_option("--seed", grad_seed);

  try {
    std::vector<std::string> args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*gen_cmd) return gen_dataset(gen, out);
    if (*aes_cmd) return train_aesthete_cmd(aes, *aes_cmd, out);
    if (*gnd_cmd) return train_gnd_cmd(gnd, *gnd_cmd, out, err);
    if (*draw_sub) return draw_cmd(draw, *draw_sub, out);
    if (*eval_sub) return evaluate_cmd(ev, out);
    if (*grad_sub) return gradcheck_cmd(grad_seed, out);
  } catch (const UsageError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const DivergenceError& e) {
    err << "diverged: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace nd::cli
