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

#include "gradcheck_suite.hpp"

#include <cmath>
#include <functional>
#include <utility>

#include "neural_drawer/aesthete.hpp"
#include "neural_drawer/autodiff.hpp"
#include "neural_drawer/gnd.hpp"
#include "neural_drawer/gradcheck.hpp"
#include "neural_drawer/graph.hpp"
#include "neural_drawer/losses.hpp"
#include "neural_drawer/rng.hpp"
#include "neural_drawer/spectral.hpp"

namespace nd {

namespace {

using ad::Tape;
using ad::Tensor;
using Inputs = std::span<const Tensor>;

constexpr double kTolerance = 1e-4;
constexpr double kSmoothStep = 1e-5;
// Piecewise-linear networks: a narrower stencil is less likely to straddle a
// relu kink.
constexpr double kReluStep = 1e-6;

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Matrix m(r, c);
  for (double& v : m.values()) v = rng.uniform(lo, hi);
  return m;
}

// Entries bounded away from zero so kinked ops stay differentiable.
Matrix away_from_zero(std::size_t r, std::size_t c, Rng& rng) {
  Matrix m(r, c);
  for (double& v : m.values()) v = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.2, 1.0);
  return m;
}

class Suite {
 public:
  explicit Suite(std::uint64_t seed) : rng_(seed) {}

  // Reduces an op output to a scalar through a fixed random projection.
  Tensor project(const Tensor& t) {
    Matrix w = random_matrix(t.rows(), t.cols(), proj_rng_);
    return ad::sum(t * t.tape()->constant(std::move(w)));
  }

  void input_case(const std::string& name, std::vector<Matrix> inputs, const std::function<Tensor(Tape&, Inputs)>& f,
                  double step = kSmoothStep) {
    proj_rng_ = Rng(derive_seed(rng_.next(), 1));
    const Rng start = proj_rng_;
    auto loss = [&](Tape& tape, Inputs in) {
      proj_rng_ = start;  // identical projection on every evaluation
      return f(tape, in);
    };
    record(name, gradient_check(loss, std::move(inputs), step).relative_error);
  }

  void param_case(const std::string& name, std::span<ad::Parameter> params, const std::function<Tensor(Tape&)>& f) {
    record(name, gradient_check_parameters(f, params, kReluStep).relative_error);
  }

  Rng& rng() { return rng_; }
  std::vector<GradCheckCase> take() { return std::move(cases_); }

 private:
  void record(const std::string& name, double err) {
    cases_.push_back({name, err, std::isfinite(err) && err <= kTolerance});
  }

  Rng rng_;
  Rng proj_rng_{0};
  std::vector<GradCheckCase> cases_;
};

// Moves every parameter off its initialization so no relu sits exactly at
// zero (zero biases on dead rows would).
void jitter(std::span<ad::Parameter> params, Rng& rng) {
  for (auto& p : params) {
    for (double& v : p.value.values()) v += rng.uniform(-0.1, 0.1);
  }
}

bool full_rank(const Layout& p) {
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < p.rows(); ++i) {
    mx += p(i, 0);
    my += p(i, 1);
  }
  mx /= static_cast<double>(p.rows());
  my /= static_cast<double>(p.rows());
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < p.rows(); ++i) {
    sxx += (p(i, 0) - mx) * (p(i, 0) - mx);
    syy += (p(i, 1) - my) * (p(i, 1) - my);
    sxy += (p(i, 0) - mx) * (p(i, 1) - my);
  }
  return sxx * syy - sxy * sxy > 1e-3 * (sxx + syy) * (sxx + syy);
}

Graph check_graph() {
  const std::vector<std::pair<int, int>> edges = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}, {0, 3}, {1, 4}};
  return Graph(6, edges);
}

void op_cases(Suite& s) {
  Rng& r = s.rng();
  auto unary = [&](const std::string& name, Matrix x, Tensor (*op)(const Tensor&)) {
    s.input_case(name, {std::move(x)}, [&, op](Tape&, Inputs in) { return s.project(op(in[0])); });
  };
  s.input_case("op/add", {random_matrix(3, 4, r), random_matrix(1, 4, r)},
               [&](Tape&, Inputs in) { return s.project(in[0] + in[1]); });
  s.input_case("op/add-column-broadcast", {random_matrix(3, 4, r), random_matrix(3, 1, r)},
               [&](Tape&, Inputs in) { return s.project(in[0] + in[1]); });
  s.input_case("op/sub", {random_matrix(3, 4, r), random_matrix(3, 4, r)},
               [&](Tape&, Inputs in) { return s.project(in[0] - in[1]); });
  s.input_case("op/mul", {random_matrix(3, 4, r), random_matrix(1, 4, r)},
               [&](Tape&, Inputs in) { return s.project(in[0] * in[1]); });
  s.input_case("op/div", {random_matrix(3, 4, r), random_matrix(3, 1, r, 0.5, 1.5)},
               [&](Tape&, Inputs in) { return s.project(in[0] / in[1]); });
  s.input_case("op/scalar-broadcast", {random_matrix(3, 4, r), random_matrix(1, 1, r)},
               [&](Tape&, Inputs in) { return s.project(in[0] * in[1]); });
  s.input_case("op/matmul", {random_matrix(3, 4, r), random_matrix(4, 2, r)},
               [&](Tape&, Inputs in) { return s.project(ad::matmul(in[0], in[1])); });
  unary("op/transpose", random_matrix(3, 4, r), ad::transpose);
  s.input_case("op/scale", {random_matrix(3, 4, r)}, [&](Tape&, Inputs in) { return s.project(ad::scale(in[0], -2.5)); });
  s.input_case("op/add-scalar", {random_matrix(3, 4, r)},
               [&](Tape&, Inputs in) { return s.project(ad::square(ad::add_scalar(in[0], 0.7))); });
  unary("op/neg", random_matrix(3, 4, r), ad::neg);
  unary("op/relu", away_from_zero(3, 4, r), ad::relu);
  s.input_case("op/leaky-relu", {away_from_zero(3, 4, r)},
               [&](Tape&, Inputs in) { return s.project(ad::leaky_relu(in[0], 0.2)); });
  unary("op/sigmoid", random_matrix(3, 4, r, -3.0, 3.0), ad::sigmoid);
  unary("op/log", random_matrix(3, 4, r, 0.3, 2.0), ad::log);
  unary("op/exp", random_matrix(3, 4, r), ad::exp);
  unary("op/sqrt", random_matrix(3, 4, r, 0.3, 2.0), ad::sqrt);
  unary("op/abs", away_from_zero(3, 4, r), ad::abs);
  unary("op/square", random_matrix(3, 4, r), ad::square);
  unary("op/sum", random_matrix(3, 4, r), ad::sum);
  unary("op/mean", random_matrix(3, 4, r), ad::mean);
  unary("op/row-sums", random_matrix(3, 4, r), ad::row_sums);
  unary("op/col-sums", random_matrix(3, 4, r), ad::col_sums);
  unary("op/col-means", random_matrix(3, 4, r), ad::col_means);
  s.input_case("op/concat-cols", {random_matrix(3, 2, r), random_matrix(3, 3, r)},
               [&](Tape&, Inputs in) { return s.project(ad::concat({in[0], in[1]}, ad::Axis::Cols)); });
  s.input_case("op/concat-rows", {random_matrix(2, 3, r), random_matrix(4, 3, r)},
               [&](Tape&, Inputs in) { return s.project(ad::concat({in[0], in[1]}, ad::Axis::Rows)); });
  s.input_case("op/slice-cols", {random_matrix(3, 5, r)},
               [&](Tape&, Inputs in) { return s.project(ad::slice_cols(in[0], 1, 3)); });
  const std::vector<int> gather = {2, 0, 2, 1, 3, 3};
  s.input_case("op/gather-rows", {random_matrix(4, 3, r)},
               [&](Tape&, Inputs in) { return s.project(ad::gather_rows(in[0], gather)); });
  const std::vector<int> segments = {0, 2, 2, 1, 0, 2};
  s.input_case("op/segment-sum", {random_matrix(6, 3, r)},
               [&](Tape&, Inputs in) { return s.project(ad::segment_sum(in[0], segments, 3)); });
  s.input_case("op/softmax-over-segments", {random_matrix(6, 2, r, -2.0, 2.0)},
               [&](Tape&, Inputs in) { return s.project(ad::softmax_over_segments(in[0], segments, 3)); });
  s.input_case("op/normalize-arc-pairs", {random_matrix(5, 8, r, 0.0, 1.0)},
               [&](Tape&, Inputs in) { return s.project(normalize_arc_pairs(in[0])); });
}

void layer_cases(Suite& s) {
  Rng& r = s.rng();
  const Graph g = check_graph();
  const GraphContext ctx = make_context(g);
  s.input_case("layer/gcn", {random_matrix(6, 3, r), random_matrix(3, 4, r), random_matrix(1, 4, r, 0.1, 0.5)},
               [&](Tape&, Inputs in) { return s.project(gcn_layer(in[0], ctx, in[1], in[2])); });
  for (bool concat : {true, false}) {
    const std::size_t out = 3, heads = 2;
    s.input_case(concat ? "layer/gat-concat" : "layer/gat-mean",
                 {random_matrix(6, 4, r), random_matrix(4, heads * out, r), random_matrix(out, heads, r),
                  random_matrix(out, heads, r), random_matrix(1, concat ? heads * out : out, r, 0.1, 0.5)},
                 [&, concat](Tape&, Inputs in) {
                   GatWeights w{in[1], in[2], in[3], in[4]};
                   return s.project(gat_layer(in[0], ctx, w, static_cast<int>(heads), concat));
                 });
  }
  s.input_case("layer/gin", {random_matrix(6, 3, r), random_matrix(3, 4, r), random_matrix(1, 4, r, 0.1, 0.5),
                             random_matrix(4, 4, r), random_matrix(1, 4, r, 0.1, 0.5)},
               [&](Tape&, Inputs in) {
                 GinWeights w{in[1], in[2], in[3], in[4]};
                 return s.project(gin_layer(in[0], ctx, w, 0.0));
               });
}

void loss_cases(Suite& s, const AestheteModel& aesthete) {
  Rng& r = s.rng();
  const Graph g = check_graph();
  const DistanceMatrix d = bfs_all_pairs(g);
  const auto pairs = disjoint_edge_pairs(g);
  for (int alpha : {0, 1, 2}) {
    const StressTerms terms = make_stress_terms(d, {.alpha = alpha, .averaged = alpha != 0});
    s.input_case("loss/stress-alpha" + std::to_string(alpha), {random_matrix(6, 2, r, 0.0, 2.0)},
                 [&](Tape&, Inputs in) { return stress(in[0], terms); });
  }
  s.input_case("loss/procrustes", {random_matrix(6, 2, r), random_matrix(6, 2, r)},
               [&](Tape&, Inputs in) { return procrustes(in[0], in[1]); });
  s.input_case("loss/aesthete", {random_matrix(6, 2, r, 0.0, 1.0)},
               [&](Tape&, Inputs in) { return aesthete_loss(aesthete, in[0], g, pairs, true); }, kReluStep);
  s.input_case("loss/aesthete-raw", {random_matrix(6, 2, r, 0.0, 1.0)},
               [&](Tape&, Inputs in) { return aesthete_loss(aesthete, in[0], g, pairs, false); }, kReluStep);
  const StressTerms terms = make_stress_terms(d);
  s.input_case("loss/combined", {random_matrix(6, 2, r, 0.0, 1.0)},
               [&](Tape&, Inputs in) { return combined_loss(in[0], terms, aesthete, g, pairs, 0.5); }, kReluStep);
}

void model_cases(Suite& s, AestheteModel& aesthete) {
  const Graph g = check_graph();
  const GraphContext ctx = make_context(g);
  const Matrix pe = laplacian_pe(g, 3).features;
  const DistanceMatrix d = bfs_all_pairs(g);
  const StressTerms terms = make_stress_terms(d);
  const Layout target = spectral_layout(g);
  const auto pairs = disjoint_edge_pairs(g);

  auto forward = [&](Tape& tape, const GndModel& m) { return m.forward(tape, ctx, tape.constant(pe)); };
  for (Aggregator kind : {Aggregator::GCN, Aggregator::GAT, Aggregator::GIN, Aggregator::MLP}) {
    GndSpec spec{.kind = kind, .input_dim = 3, .hidden = 4, .layers = 2, .heads = 2};
    GndModel model(spec, s.rng().next());
    // Procrustes is not differentiable on rank-deficient layouts (|det| kink);
    // move until the output spans the plane.
    for (int attempt = 0; attempt < 16; ++attempt) {
      jitter(model.parameters(), s.rng());
      Tape probe;
      if (full_rank(forward(probe, model).value())) break;
    }
    const std::string base = "model/" + std::string(aggregator_name(kind));
    s.param_case(base + "/supervised", model.parameters(),
                 [&](Tape& tape) { return procrustes(forward(tape, model), tape.constant(target)); });
    s.param_case(base + "/stress", model.parameters(), [&](Tape& tape) { return stress(forward(tape, model), terms); });
    s.param_case(base + "/aesthete-guided", model.parameters(), [&](Tape& tape) {
      return combined_loss(forward(tape, model), terms, aesthete, g, pairs, 0.5);
    });
  }
  // Aesthete network weights themselves, through the training objective.
  Rng r(s.rng().next());
  Matrix batch(6, 8);
  for (double& v : batch.values()) v = r.uniform();
  Matrix labels(6, 1);
  for (std::size_t i = 0; i < 6; ++i) labels[i] = static_cast<double>(i % 2);
  s.param_case("model/aesthete-bce", aesthete.parameters(), [&](Tape& tape) {
    Tensor z = aesthete.logits(tape, tape.constant(batch));
    Tensor softplus = ad::log(ad::add_scalar(ad::exp(z), 1.0));
    return ad::mean(softplus - z * tape.constant(labels));
  });
}

}  // namespace

std::vector<GradCheckCase> run_gradcheck_suite(std::uint64_t seed) {
  Suite s(seed);
  AestheteModel aesthete(derive_seed(seed, 7));
  jitter(aesthete.parameters(), s.rng());
  op_cases(s);
  layer_cases(s);
  loss_cases(s, aesthete);
  model_cases(s, aesthete);
  return s.take();
}

}  // namespace nd
