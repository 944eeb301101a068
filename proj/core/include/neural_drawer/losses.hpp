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

#ifndef NEURAL_DRAWER_LOSSES_HPP
#define NEURAL_DRAWER_LOSSES_HPP

#include <span>
#include <utility>
#include <vector>

#include "neural_drawer/aesthete.hpp"
#include "neural_drawer/autodiff.hpp"
#include "neural_drawer/graph.hpp"
#include "neural_drawer/matrix.hpp"

namespace nd {

/// Stress weights w_ij = d_ij^-alpha with alpha in {0, 1, 2}; averaged
/// divides by the number of node pairs.
struct StressConfig {
  int alpha = 1;
  bool averaged = true;
};

/// Smoothing inside ||p_i - p_j|| = sqrt(squared + kNormSmoothing).
inline constexpr double kNormSmoothing = 1e-12;

/// Pair lists and constants for stress over all i < j.
struct StressTerms {
  std::vector<int> first;
  std::vector<int> second;
  Matrix distance;  // D x 1
  Matrix weight;    // D x 1
  bool averaged = true;

  std::size_t pair_count() const noexcept { return first.size(); }
};

StressTerms make_stress_terms(const DistanceMatrix& d, StressConfig cfg = {});

ad::Tensor stress(const ad::Tensor& layout, const StressTerms& terms);
ad::Tensor stress(const ad::Tensor& layout, const DistanceMatrix& d, StressConfig cfg = {});
double stress_value(const Layout& layout, const DistanceMatrix& d, StressConfig cfg = {});

/// Procrustes statistic 1 - (sum of singular values of Pc^T Qc)^2 /
/// (tr(Pc^T Pc) tr(Qc^T Qc)) on column-centred layouts, in [0, 1], lower is
/// more similar. Throws std::invalid_argument if either centred layout is
/// all zeros.
ad::Tensor procrustes(const ad::Tensor& p, const ad::Tensor& q);
double procrustes_value(const Layout& p, const Layout& q);

/// Number of edge pairs without a shared endpoint whose segments intersect.
int count_crossings(const Layout& layout, const Graph& g);

/// Averaged stress plus lambda times the aesthete loss over the given pairs.
/// lambda == 0 evaluates the stress term alone.
ad::Tensor combined_loss(const ad::Tensor& layout, const StressTerms& terms, const AestheteModel& model,
                         const Graph& g, std::span<const std::pair<int, int>> pairs, double lambda,
                         bool normalize_pairs = true);

}  // namespace nd

#endif  // NEURAL_DRAWER_LOSSES_HPP
