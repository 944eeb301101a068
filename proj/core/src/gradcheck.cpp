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

#include "neural_drawer/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace nd {

namespace {

double relative_error(const std::vector<Matrix>& a, const std::vector<Matrix>& n) {
  double diff = 0.0, na = 0.0, nn = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < a[i].size(); ++k) {
      const double d = a[i][k] - n[i][k];
      diff += d * d;
      na += a[i][k] * a[i][k];
      nn += n[i][k] * n[i][k];
    }
  }
  return std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nn), 1e-8});
}

double evaluate(const InputLoss& loss, const std::vector<Matrix>& inputs) {
  ad::Tape tape;
  std::vector<ad::Tensor> vars;
  for (const Matrix& m : inputs) vars.push_back(tape.constant(m));
  return loss(tape, vars).item();
}

}  // namespace

GradCheckResult gradient_check(const InputLoss& loss, std::vector<Matrix> inputs, double step) {
  GradCheckResult result;
  {
    ad::Tape tape;
    std::vector<ad::Tensor> vars;
    for (const Matrix& m : inputs) vars.push_back(tape.variable(m));
    ad::Tensor out = loss(tape, vars);
    tape.backward(out);
    for (const ad::Tensor& v : vars) result.analytic.push_back(v.grad());
  }
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    Matrix numeric(inputs[i].rows(), inputs[i].cols());
    for (std::size_t k = 0; k < inputs[i].size(); ++k) {
      const double saved = inputs[i][k];
      inputs[i][k] = saved + step;
      const double up = evaluate(loss, inputs);
      inputs[i][k] = saved - step;
      const double down = evaluate(loss, inputs);
      inputs[i][k] = saved;
      numeric[k] = (up - down) / (2.0 * step);
    }
    result.numeric.push_back(std::move(numeric));
  }
  result.relative_error = relative_error(result.analytic, result.numeric);
  return result;
}

GradCheckResult gradient_check_parameters(const ParameterLoss& loss, std::span<ad::Parameter> params,
                                          double step) {
  GradCheckResult result;
  {
    ad::Tape tape;
    ad::Tensor out = loss(tape);
    tape.backward(out);
    for (const ad::Parameter& p : params) result.analytic.push_back(tape.parameter_gradient(p));
  }
  auto eval = [&loss]() {
    ad::Tape tape;
    return loss(tape).item();
  };
  for (ad::Parameter& p : params) {
    Matrix numeric(p.value.rows(), p.value.cols());
    for (std::size_t k = 0; k < p.value.size(); ++k) {
      const double saved = p.value[k];
      p.value[k] = saved + step;
      const double up = eval();
      p.value[k] = saved - step;
      const double down = eval();
      p.value[k] = saved;
      numeric[k] = (up - down) / (2.0 * step);
    }
    result.numeric.push_back(std::move(numeric));
  }
  result.relative_error = relative_error(result.analytic, result.numeric);
  return result;
}

}  // namespace nd
