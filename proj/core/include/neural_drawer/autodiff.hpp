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

// Minimal reverse-mode automatic differentiation over dense 2-D tensors.
//
// A Tape records every operation in execution order; Tape::backward walks the
// records in exact reverse order and accumulates adjoints additively. Tensor
// is a lightweight handle (tape pointer + node id) into a tape. Trainable
// weights live outside tapes as Parameter objects and are bound to a tape as
// leaves, so several tapes can read one parameter set concurrently.

#ifndef NEURAL_DRAWER_AUTODIFF_HPP
#define NEURAL_DRAWER_AUTODIFF_HPP

#include <cstddef>
#include <deque>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "neural_drawer/matrix.hpp"
#include "neural_drawer/rng.hpp"

namespace nd::ad {

class Tape;

/// Trainable weight matrix with its accumulated gradient.
struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;

  Parameter() = default;
  Parameter(std::string n, Matrix v) : name(std::move(n)), value(std::move(v)), grad(value.rows(), value.cols()) {}
  void zero_grad() { grad = Matrix(value.rows(), value.cols()); }
};

/// Glorot-uniform initialization: U(-sqrt(6 / (fan_in + fan_out)), +...).
Matrix glorot_uniform(std::size_t fan_in, std::size_t fan_out, Rng& rng);

class Tensor {
 public:
  Tensor() = default;

  std::size_t rows() const;
  std::size_t cols() const;
  const Matrix& value() const;
  /// Adjoint after Tape::backward; zeros for leaves the loss does not reach.
  const Matrix& grad() const;
  bool requires_grad() const;
  /// Value of a 1 x 1 tensor.
  double item() const;

  Tape* tape() const noexcept { return tape_; }
  std::size_t id() const noexcept { return id_; }
  bool valid() const noexcept { return tape_ != nullptr; }

 private:
  friend class Tape;
  Tensor(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}
  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

class Tape {
 public:
  /// Propagates the node's adjoint to its parents. Receives the tape and the
  /// node's own id.
  using BackwardFn = std::function<void(Tape&, std::size_t)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Tensor constant(Matrix value);
  /// Leaf that requires a gradient and is owned by the tape.
  Tensor variable(Matrix value);
  /// Leaf bound to an external parameter; repeated calls return the same node.
  Tensor parameter(const Parameter& p);

  /// Records a custom operation. The backward function only runs when at
  /// least one parent requires a gradient.
  Tensor record(Matrix value, std::initializer_list<Tensor> parents, BackwardFn backward);
  Tensor record(Matrix value, std::span<const Tensor> parents, BackwardFn backward);

  /// Reverse sweep from a 1 x 1 loss. Clears adjoints from any earlier sweep.
  void backward(const Tensor& loss);

  /// Adjoint of a bound parameter (zeros if it did not participate).
  Matrix parameter_gradient(const Parameter& p) const;
  /// Adds the adjoints of every bound parameter into Parameter::grad.
  void accumulate_parameter_gradients(std::span<Parameter> params) const;

  std::size_t size() const noexcept { return nodes_.size(); }
  const Matrix& value(std::size_t id) const { return nodes_[id].value; }
  const Matrix& grad(std::size_t id) const;
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }
  /// Adjoint buffer for accumulation inside backward functions.
  Matrix& grad_buffer(std::size_t id);

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool requires_grad = false;
    BackwardFn backward;
  };

  Tensor push(Matrix value, bool requires_grad, BackwardFn backward);

  std::deque<Node> nodes_;
  std::unordered_map<const Parameter*, std::size_t> bound_;
  Matrix empty_grad_;
};

// ---------------------------------------------------------------------------
// Operations. Binary elementwise ops broadcast any operand dimension of size 1
// (a 1 x m row over the leading dimension, an n x 1 column across columns, a
// 1 x 1 scalar everywhere). Shape mismatches throw ShapeError naming the op.

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor div(const Tensor& a, const Tensor& b);

Tensor scale(const Tensor& a, double factor);
Tensor add_scalar(const Tensor& a, double offset);
Tensor neg(const Tensor& a);

Tensor relu(const Tensor& a);
Tensor leaky_relu(const Tensor& a, double slope);
Tensor sigmoid(const Tensor& a);
Tensor log(const Tensor& a);
Tensor exp(const Tensor& a);
Tensor sqrt(const Tensor& a);
Tensor abs(const Tensor& a);
Tensor square(const Tensor& a);

/// Sum of all entries, 1 x 1.
Tensor sum(const Tensor& a);
/// Mean of all entries, 1 x 1.
Tensor mean(const Tensor& a);
/// n x m -> n x 1.
Tensor row_sums(const Tensor& a);
/// n x m -> 1 x m.
Tensor col_sums(const Tensor& a);
/// n x m -> 1 x m.
Tensor col_means(const Tensor& a);

enum class Axis { Rows, Cols };
/// Axis::Cols joins side by side (equal row counts); Axis::Rows stacks.
Tensor concat(std::span<const Tensor> parts, Axis axis = Axis::Cols);
Tensor concat(std::initializer_list<Tensor> parts, Axis axis = Axis::Cols);
Tensor slice_cols(const Tensor& a, std::size_t begin, std::size_t count);

/// out[e] = a[index[e]].
Tensor gather_rows(const Tensor& a, std::span<const int> index);
/// out[s] = sum of a[e] over e with segment[e] == s.
Tensor segment_sum(const Tensor& a, std::span<const int> segment, std::size_t num_segments);
/// Per column, softmax of the scores within each segment.
Tensor softmax_over_segments(const Tensor& scores, std::span<const int> segment,
                             std::size_t num_segments);

inline Tensor operator+(const Tensor& a, const Tensor& b) { return add(a, b); }
inline Tensor operator-(const Tensor& a, const Tensor& b) { return sub(a, b); }
inline Tensor operator*(const Tensor& a, const Tensor& b) { return mul(a, b); }
inline Tensor operator/(const Tensor& a, const Tensor& b) { return div(a, b); }
inline Tensor operator*(double c, const Tensor& a) { return scale(a, c); }
inline Tensor operator*(const Tensor& a, double c) { return scale(a, c); }
inline Tensor operator+(const Tensor& a, double c) { return add_scalar(a, c); }
inline Tensor operator-(const Tensor& a) { return neg(a); }

// Raw kernels shared with non-differentiated code paths.
void gemm_nn(const Matrix& a, const Matrix& b, Matrix& c);  // c += a b
void gemm_nt(const Matrix& a, const Matrix& b, Matrix& c);  // c += a b^T
void gemm_tn(const Matrix& a, const Matrix& b, Matrix& c);  // c += a^T b

}  // namespace nd::ad

#endif  // NEURAL_DRAWER_AUTODIFF_HPP
