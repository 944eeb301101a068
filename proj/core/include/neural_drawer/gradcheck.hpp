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

#ifndef NEURAL_DRAWER_GRADCHECK_HPP
#define NEURAL_DRAWER_GRADCHECK_HPP

#include <functional>
#include <span>
#include <vector>

#include "neural_drawer/autodiff.hpp"

namespace nd {

struct GradCheckResult {
  /// ||analytic - numeric||_2 / max(||analytic||_2, ||numeric||_2, 1e-8)
  /// over all checked entries.
  double relative_error = 0.0;
  std::vector<Matrix> analytic;
  std::vector<Matrix> numeric;

  bool passed(double tolerance = 1e-4) const { return relative_error <= tolerance; }
};

/// Builds a scalar loss on a fresh tape from variables holding the inputs.
using InputLoss = std::function<ad::Tensor(ad::Tape&, std::span<const ad::Tensor>)>;
/// Builds a scalar loss on a fresh tape that binds the given parameters.
using ParameterLoss = std::function<ad::Tensor(ad::Tape&)>;

/// Compares reverse-mode gradients with central finite differences.
GradCheckResult gradient_check(const InputLoss& loss, std::vector<Matrix> inputs, double step = 1e-5);

/// Same check with respect to external parameters. Values are restored
/// afterwards.
GradCheckResult gradient_check_parameters(const ParameterLoss& loss, std::span<ad::Parameter> params,
                                          double step = 1e-5);

}  // namespace nd

#endif  // NEURAL_DRAWER_GRADCHECK_HPP
