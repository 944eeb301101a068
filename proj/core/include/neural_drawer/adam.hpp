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

#ifndef NEURAL_DRAWER_ADAM_HPP
#define NEURAL_DRAWER_ADAM_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "neural_drawer/autodiff.hpp"
#include "neural_drawer/matrix.hpp"

namespace nd {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// First/second moment estimates for a fixed list of parameter shapes.
struct AdamState {
  AdamConfig config;
  std::vector<Matrix> first_moment;
  std::vector<Matrix> second_moment;
  std::int64_t step = 0;

  AdamState() = default;
  explicit AdamState(AdamConfig c) : config(c) {}
};

/// One bias-corrected Adam update of params[i] using grads[i].
void adam_step(std::span<Matrix* const> params, std::span<const Matrix* const> grads, AdamState& state);

/// Updates every parameter from its accumulated Parameter::grad.
void adam_step(std::span<ad::Parameter> params, AdamState& state);

/// Single-tensor convenience overload.
void adam_step(Matrix& param, const Matrix& grad, AdamState& state);

}  // namespace nd

#endif  // NEURAL_DRAWER_ADAM_HPP
