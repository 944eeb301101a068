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

#include "neural_drawer/losses.hpp"

#include <cmath>
#include <stdexcept>

#include "neural_drawer/errors.hpp"
#include "neural_drawer/geometry.hpp"

namespace nd {

StressTerms make_stress_terms(const DistanceMatrix& d, StressConfig cfg) {
  if (cfg.alpha < 0 || cfg.alpha > 2) throw std::invalid_argument("StressConfig: alpha must be 0, 1 or 2");
  const int n = d.size();
  StressTerms t;
  t.averaged = cfg.averaged;
  const std::size_t pairs = static_cast<std::size_t>(n) * static_cast<std::size_t>(n > 0 ? n - 1 : 0) / 2;
  t.first.reserve(pairs);
  t.second.reserve(pairs);
  t.distance = Matrix(pairs, 1);
  t.weight = Matrix(pairs, 1);
  std::size_t k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dij = d(i, j);
      t.first.push_back(i);
      t.second.push_back(j);
      t.distance[k] = dij;
      t.weight[k] = std::pow(dij, -static_cast<double>(cfg.alpha));
      ++k;
    }
  }
  return t;
}

ad::Tensor stress(const ad::Tensor& layout, const StressTerms& terms) {
  ad::Tape& tape = *layout.tape();
  if (layout.cols() != 2) throw ShapeError("stress: layout must be N x 2, got " + layout.value().shape_string());
  if (terms.pair_count() == 0) return tape.constant(Matrix(1, 1));
  ad::Tensor diff = ad::gather_rows(layout, terms.first) - ad::gather_rows(layout, terms.second);
  ad::Tensor dist = ad::sqrt(ad::add_scalar(ad::row_sums(ad::square(diff)), kNormSmoothing));
  ad::Tensor residual = dist - tape.constant(terms.distance);
  ad::Tensor total = ad::sum(tape.constant(terms.weight) * ad::square(residual));
  return terms.averaged ? ad::scale(total, 1.0 / static_cast<double>(terms.pair_count())) : total;
}

ad::Tensor stress(const ad::Tensor& layout, const DistanceMatrix& d, StressConfig cfg) {
  return stress(layout, make_stress_terms(d, cfg));
}

double stress_value(const Layout& layout, const DistanceMatrix& d, StressConfig cfg) {
  if (layout.rows() != static_cast<std::size_t>(d.size()) || layout.cols() != 2) {
    throw ShapeError("stress_value: layout " + layout.shape_string() + " for " + std::to_string(d.size()) +
                     " nodes");
  }
  const int n = d.size();
  double total = 0.0;
  std::size_t pairs = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dx = layout(i, 0) - layout(j, 0);
      const double dy = layout(i, 1) - layout(j, 1);
      const double dist = std::sqrt(dx * dx + dy * dy + kNormSmoothing);
      const double dij = d(i, j);
      const double r = dist - dij;
      total += std::pow(dij, -static_cast<double>(cfg.alpha)) * r * r;
      ++pairs;
    }
  }
  return cfg.averaged && pairs > 0 ? total / static_cast<double>(pairs) : total;
}

namespace {

ad::Tensor entry(const ad::Tensor& m, int r, int c) {
  const int row[] = {r};
  return ad::gather_rows(ad::slice_cols(m, static_cast<std::size_t>(c), 1), row);
}

}  // namespace

ad::Tensor procrustes(const ad::Tensor& p, const ad::Tensor& q) {
  if (!p.value().same_shape(q.value()) || p.cols() != 2) {
    throw ShapeError("procrustes: layouts must share an N x 2 shape, got " + p.value().shape_string() + " and " +
                     q.value().shape_string());
  }
  ad::Tensor pc = p - ad::col_means(p);
  ad::Tensor qc = q - ad::col_means(q);
  ad::Tensor norm_p = ad::sum(ad::square(pc));
  ad::Tensor norm_q = ad::sum(ad::square(qc));
  if (norm_p.item() <= 1e-24 || norm_q.item() <= 1e-24) {
    throw std::invalid_argument("procrustes: layout collapses to a single point after centering");
  }
  ad::Tensor m = ad::matmul(ad::transpose(pc), qc);
  // (sigma_1 + sigma_2)^2 = ||M||_F^2 + 2 |det M| for a 2 x 2 matrix.
  ad::Tensor det = entry(m, 0, 0) * entry(m, 1, 1) - entry(m, 0, 1) * entry(m, 1, 0);
  ad::Tensor nuclear_sq = ad::sum(ad::square(m)) + ad::scale(ad::abs(det), 2.0);
  ad::Tensor ratio = nuclear_sq / (norm_p * norm_q);
  return ad::add_scalar(ad::neg(ratio), 1.0);
}

double procrustes_value(const Layout& p, const Layout& q) {
  ad::Tape tape;
  return procrustes(tape.constant(p), tape.constant(q)).item();
}

int count_crossings(const Layout& layout, const Graph& g) {
  if (layout.rows() != static_cast<std::size_t>(g.node_count()) || layout.cols() != 2) {
    throw ShapeError("count_crossings: layout " + layout.shape_string() + " for " +
                     std::to_string(g.node_count()) + " nodes");
  }
  const auto edges = g.edges();
  int count = 0;
  for (std::size_t a = 0; a < edges.size(); ++a) {
    const Edge& e = edges[a];
    const Point2 p1{layout(e.u, 0), layout(e.u, 1)};
    const Point2 p2{layout(e.v, 0), layout(e.v, 1)};
    for (std::size_t b = a + 1; b < edges.size(); ++b) {
      const Edge& f = edges[b];
      if (e.u == f.u || e.u == f.v || e.v == f.u || e.v == f.v) continue;
      if (segments_intersect(p1, p2, {layout(f.u, 0), layout(f.u, 1)}, {layout(f.v, 0), layout(f.v, 1)})) {
        ++count;
      }
    }
  }
  return count;
}

ad::Tensor combined_loss(const ad::Tensor& layout, const StressTerms& terms, const AestheteModel& model,
                         const Graph& g, std::span<const std::pair<int, int>> pairs, double lambda,
                         bool normalize_pairs) {
  if (lambda < 0.0) throw std::invalid_argument("combined_loss: lambda must be non-negative");
  if (!terms.averaged) throw std::invalid_argument("combined_loss: expects averaged stress terms");
  ad::Tensor s = stress(layout, terms);
  if (lambda == 0.0) return s;
  return s + ad::scale(aesthete_loss(model, layout, g, pairs, normalize_pairs), lambda);
}

}  // namespace nd
