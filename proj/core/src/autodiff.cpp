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

#include "neural_drawer/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "neural_drawer/errors.hpp"

namespace nd::ad {

Matrix glorot_uniform(std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Matrix w(fan_in, fan_out);
  for (double& x : w.values()) x = rng.uniform(-bound, bound);
  return w;
}

// ---------------------------------------------------------------------------
// Tensor

std::size_t Tensor::rows() const { return tape_->value(id_).rows(); }
std::size_t Tensor::cols() const { return tape_->value(id_).cols(); }
const Matrix& Tensor::value() const { return tape_->value(id_); }
const Matrix& Tensor::grad() const { return tape_->grad(id_); }
bool Tensor::requires_grad() const { return tape_->requires_grad(id_); }
double Tensor::item() const {
  const Matrix& v = value();
  if (v.size() != 1) throw ShapeError("Tensor::item: tensor has shape " + v.shape_string());
  return v[0];
}

// ---------------------------------------------------------------------------
// Tape

Tensor Tape::push(Matrix value, bool requires_grad, BackwardFn backward) {
  nodes_.push_back(Node{std::move(value), Matrix{}, requires_grad, std::move(backward)});
  return Tensor(this, nodes_.size() - 1);
}

Tensor Tape::constant(Matrix value) { return push(std::move(value), false, nullptr); }

Tensor Tape::variable(Matrix value) { return push(std::move(value), true, nullptr); }

Tensor Tape::parameter(const Parameter& p) {
  if (auto it = bound_.find(&p); it != bound_.end()) return Tensor(this, it->second);
  Tensor t = push(p.value, true, nullptr);
  bound_.emplace(&p, t.id());
  return t;
}

Tensor Tape::record(Matrix value, std::initializer_list<Tensor> parents, BackwardFn backward) {
  return record(std::move(value), std::span<const Tensor>(parents.begin(), parents.size()),
                std::move(backward));
}

Tensor Tape::record(Matrix value, std::span<const Tensor> parents, BackwardFn backward) {
  bool needs = false;
  for (const Tensor& p : parents) {
    if (p.tape() != this) throw std::invalid_argument("Tape::record: parent from another tape");
    needs = needs || nodes_[p.id()].requires_grad;
  }
  return push(std::move(value), needs, needs ? std::move(backward) : nullptr);
}

const Matrix& Tape::grad(std::size_t id) const { return nodes_[id].grad; }

Matrix& Tape::grad_buffer(std::size_t id) { return nodes_[id].grad; }

void Tape::backward(const Tensor& loss) {
  if (loss.tape() != this) throw std::invalid_argument("Tape::backward: loss from another tape");
  const Matrix& lv = nodes_[loss.id()].value;
  if (lv.rows() != 1 || lv.cols() != 1) {
    throw ShapeError("backward: loss must be a 1x1 scalar, got " + lv.shape_string());
  }
  for (Node& n : nodes_) {
    if (n.requires_grad) {
      n.grad = Matrix(n.value.rows(), n.value.cols());
    } else {
      n.grad = Matrix{};
    }
  }
  if (!nodes_[loss.id()].requires_grad) return;
  nodes_[loss.id()].grad[0] = 1.0;
  for (std::size_t i = loss.id() + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (n.requires_grad && n.backward) n.backward(*this, i);
  }
}

Matrix Tape::parameter_gradient(const Parameter& p) const {
  auto it = bound_.find(&p);
  if (it == bound_.end() || nodes_[it->second].grad.empty()) {
    return Matrix(p.value.rows(), p.value.cols());
  }
  return nodes_[it->second].grad;
}

void Tape::accumulate_parameter_gradients(std::span<Parameter> params) const {
  for (Parameter& p : params) {
    auto it = bound_.find(&p);
    if (it == bound_.end()) continue;
    const Matrix& g = nodes_[it->second].grad;
    if (g.empty()) continue;
    if (!p.grad.same_shape(g)) p.grad = Matrix(g.rows(), g.cols());
    for (std::size_t k = 0; k < g.size(); ++k) p.grad[k] += g[k];
  }
}

// ---------------------------------------------------------------------------
// Kernels

void gemm_nn(const Matrix& a, const Matrix& b, Matrix& c) {
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  for (std::size_t i = 0; i < n; ++i) {
    double* out = c.data() + i * m;
    const double* arow = a.data() + i * k;
    for (std::size_t t = 0; t < k; ++t) {
      const double av = arow[t];
      if (av == 0.0) continue;
      const double* brow = b.data() + t * m;
      for (std::size_t j = 0; j < m; ++j) out[j] += av * brow[j];
    }
  }
}

void gemm_nt(const Matrix& a, const Matrix& b, Matrix& c) {
  const std::size_t n = a.rows(), k = a.cols(), m = b.rows();
  for (std::size_t i = 0; i < n; ++i) {
    const double* arow = a.data() + i * k;
    double* out = c.data() + i * m;
    for (std::size_t j = 0; j < m; ++j) {
      const double* brow = b.data() + j * k;
      double s = 0.0;
      for (std::size_t t = 0; t < k; ++t) s += arow[t] * brow[t];
      out[j] += s;
    }
  }
}

void gemm_tn(const Matrix& a, const Matrix& b, Matrix& c) {
  const std::size_t k = a.rows(), n = a.cols(), m = b.cols();
  for (std::size_t t = 0; t < k; ++t) {
    const double* arow = a.data() + t * n;
    const double* brow = b.data() + t * m;
    for (std::size_t i = 0; i < n; ++i) {
      const double av = arow[i];
      if (av == 0.0) continue;
      double* out = c.data() + i * m;
      for (std::size_t j = 0; j < m; ++j) out[j] += av * brow[j];
    }
  }
}

namespace {

[[noreturn]] void shape_fail(const char* op, const Matrix& a, const Matrix& b) {
  throw ShapeError(std::string(op) + ": incompatible shapes " + a.shape_string() + " and " +
                   b.shape_string());
}

struct Broadcast {
  std::size_t rows, cols;
  std::size_t a_rs, a_cs, b_rs, b_cs;
};

Broadcast broadcast_shape(const char* op, const Matrix& a, const Matrix& b) {
  auto dim = [&](std::size_t x, std::size_t y) {
    if (x == y || y == 1) return x;
    if (x == 1) return y;
    shape_fail(op, a, b);
  };
  Broadcast s{};
  s.rows = dim(a.rows(), b.rows());
  s.cols = dim(a.cols(), b.cols());
  s.a_rs = a.rows() == 1 ? 0 : a.cols();
  s.a_cs = a.cols() == 1 ? 0 : 1;
  s.b_rs = b.rows() == 1 ? 0 : b.cols();
  s.b_cs = b.cols() == 1 ? 0 : 1;
  return s;
}

// f(a, b) forward; da(a, b, out) and db(a, b, out) local partials.
template <typename F, typename DA, typename DB>
Tensor binary_op(const char* op, const Tensor& a, const Tensor& b, F f, DA da, DB db) {
  if (a.tape() != b.tape()) throw std::invalid_argument(std::string(op) + ": tensors on different tapes");
  const Matrix& av = a.value();
  const Matrix& bv = b.value();
  const Broadcast s = broadcast_shape(op, av, bv);
  Matrix out(s.rows, s.cols);
  for (std::size_t r = 0; r < s.rows; ++r)
    for (std::size_t c = 0; c < s.cols; ++c)
      out(r, c) = f(av[r * s.a_rs + c * s.a_cs], bv[r * s.b_rs + c * s.b_cs]);
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape()->record(std::move(out), {a, b}, [=](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    const Matrix& o = t.value(self);
    const Matrix& x = t.value(ia);
    const Matrix& y = t.value(ib);
    const bool want_a = t.requires_grad(ia);
    const bool want_b = t.requires_grad(ib);
    Matrix* ga = want_a ? &t.grad_buffer(ia) : nullptr;
    Matrix* gb = want_b ? &t.grad_buffer(ib) : nullptr;
    for (std::size_t r = 0; r < s.rows; ++r) {
      for (std::size_t c = 0; c < s.cols; ++c) {
        const std::size_t ka = r * s.a_rs + c * s.a_cs;
        const std::size_t kb = r * s.b_rs + c * s.b_cs;
        const double gi = g(r, c);
        if (ga) (*ga)[ka] += gi * da(x[ka], y[kb], o(r, c));
        if (gb) (*gb)[kb] += gi * db(x[ka], y[kb], o(r, c));
      }
    }
  });
}

// f(x) forward; df(x, out) local derivative.
template <typename F, typename DF>
Tensor unary_op(const Tensor& a, F f, DF df) {
  const Matrix& av = a.value();
  Matrix out(av.rows(), av.cols());
  for (std::size_t k = 0; k < av.size(); ++k) out[k] = f(av[k]);
  const std::size_t ia = a.id();
  return a.tape()->record(std::move(out), {a}, [=](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    const Matrix& o = t.value(self);
    const Matrix& x = t.value(ia);
    Matrix& ga = t.grad_buffer(ia);
    for (std::size_t k = 0; k < g.size(); ++k) ga[k] += g[k] * df(x[k], o[k]);
  });
}

void check_index(const char* op, std::span<const int> index, std::size_t bound) {
  for (int i : index) {
    if (i < 0 || static_cast<std::size_t>(i) >= bound) {
      throw ShapeError(std::string(op) + ": index " + std::to_string(i) + " out of range [0, " +
                       std::to_string(bound) + ")");
    }
  }
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  const Matrix& av = a.value();
  const Matrix& bv = b.value();
  if (av.cols() != bv.rows()) shape_fail("matmul", av, bv);
  Matrix out(av.rows(), bv.cols());
  gemm_nn(av, bv, out);
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape()->record(std::move(out), {a, b}, [ia, ib](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    if (t.requires_grad(ia)) gemm_nt(g, t.value(ib), t.grad_buffer(ia));
    if (t.requires_grad(ib)) gemm_tn(t.value(ia), g, t.grad_buffer(ib));
  });
}

Tensor transpose(const Tensor& a) {
  const std::size_t ia = a.id();
  return a.tape()->record(a.value().transposed(), {a}, [ia](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    Matrix& ga = t.grad_buffer(ia);
    for (std::size_t r = 0; r < g.rows(); ++r)
      for (std::size_t c = 0; c < g.cols(); ++c) ga(c, r) += g(r, c);
  });
}

Tensor add(const Tensor& a, const Tensor& b) {
  return binary_op(
      "add", a, b, [](double x, double y) { return x + y; },
      [](double, double, double) { return 1.0; }, [](double, double, double) { return 1.0; });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  return binary_op(
      "sub", a, b, [](double x, double y) { return x - y; },
      [](double, double, double) { return 1.0; }, [](double, double, double) { return -1.0; });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  return binary_op(
      "mul", a, b, [](double x, double y) { return x * y; },
      [](double, double y, double) { return y; }, [](double x, double, double) { return x; });
}

Tensor div(const Tensor& a, const Tensor& b) {
  return binary_op(
      "div", a, b, [](double x, double y) { return x / y; },
      [](double, double y, double) { return 1.0 / y; },
      [](double, double y, double o) { return -o / y; });
}

Tensor scale(const Tensor& a, double factor) {
  return unary_op(
      a, [factor](double x) { return factor * x; }, [factor](double, double) { return factor; });
}

Tensor add_scalar(const Tensor& a, double offset) {
  return unary_op(
      a, [offset](double x) { return x + offset; }, [](double, double) { return 1.0; });
}

Tensor neg(const Tensor& a) { return scale(a, -1.0); }

Tensor relu(const Tensor& a) {
  return unary_op(
      a, [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Tensor leaky_relu(const Tensor& a, double slope) {
  return unary_op(
      a, [slope](double x) { return x > 0.0 ? x : slope * x; },
      [slope](double x, double) { return x > 0.0 ? 1.0 : slope; });
}

Tensor sigmoid(const Tensor& a) {
  return unary_op(
      a,
      [](double x) {
        if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
        const double e = std::exp(x);
        return e / (1.0 + e);
      },
      [](double, double o) { return o * (1.0 - o); });
}

Tensor log(const Tensor& a) {
  return unary_op(
      a, [](double x) { return std::log(x); }, [](double x, double) { return 1.0 / x; });
}

Tensor exp(const Tensor& a) {
  return unary_op(
      a, [](double x) { return std::exp(x); }, [](double, double o) { return o; });
}

Tensor sqrt(const Tensor& a) {
  return unary_op(
      a, [](double x) { return std::sqrt(x); }, [](double, double o) { return 0.5 / o; });
}

Tensor abs(const Tensor& a) {
  return unary_op(
      a, [](double x) { return std::abs(x); },
      [](double x, double) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); });
}

Tensor square(const Tensor& a) {
  return unary_op(
      a, [](double x) { return x * x; }, [](double x, double) { return 2.0 * x; });
}

Tensor sum(const Tensor& a) {
  double s = 0.0;
  for (double x : a.value().values()) s += x;
  const std::size_t ia = a.id();
  return a.tape()->record(Matrix(1, 1, s), {a}, [ia](Tape& t, std::size_t self) {
    const double g = t.grad(self)[0];
    for (double& x : t.grad_buffer(ia).values()) x += g;
  });
}

Tensor mean(const Tensor& a) {
  const double n = static_cast<double>(a.value().size());
  if (n == 0) throw ShapeError("mean: empty tensor");
  return scale(sum(a), 1.0 / n);
}

Tensor row_sums(const Tensor& a) {
  const Matrix& av = a.value();
  Matrix out(av.rows(), 1);
  for (std::size_t r = 0; r < av.rows(); ++r) {
    double s = 0.0;
    for (double x : av.row(r)) s += x;
    out(r, 0) = s;
  }
  const std::size_t ia = a.id();
  return a.tape()->record(std::move(out), {a}, [ia](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    Matrix& ga = t.grad_buffer(ia);
    for (std::size_t r = 0; r < ga.rows(); ++r)
      for (double& x : ga.row(r)) x += g(r, 0);
  });
}

Tensor col_sums(const Tensor& a) {
  const Matrix& av = a.value();
  Matrix out(1, av.cols());
  for (std::size_t r = 0; r < av.rows(); ++r)
    for (std::size_t c = 0; c < av.cols(); ++c) out(0, c) += av(r, c);
  const std::size_t ia = a.id();
  return a.tape()->record(std::move(out), {a}, [ia](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    Matrix& ga = t.grad_buffer(ia);
    for (std::size_t r = 0; r < ga.rows(); ++r)
      for (std::size_t c = 0; c < ga.cols(); ++c) ga(r, c) += g(0, c);
  });
}

Tensor col_means(const Tensor& a) {
  if (a.rows() == 0) throw ShapeError("col_means: no rows");
  return scale(col_sums(a), 1.0 / static_cast<double>(a.rows()));
}

Tensor concat(std::initializer_list<Tensor> parts, Axis axis) {
  return concat(std::span<const Tensor>(parts.begin(), parts.size()), axis);
}

Tensor concat(std::span<const Tensor> parts, Axis axis) {
  if (parts.empty()) throw ShapeError("concat: no inputs");
  Tape* tape = parts.front().tape();
  std::vector<std::size_t> ids;
  std::vector<std::size_t> offsets;
  std::size_t rows = 0, cols = 0;
  if (axis == Axis::Cols) {
    rows = parts.front().rows();
    for (const Tensor& p : parts) {
      if (p.rows() != rows) shape_fail("concat", parts.front().value(), p.value());
      offsets.push_back(cols);
      cols += p.cols();
      ids.push_back(p.id());
    }
  } else {
    cols = parts.front().cols();
    for (const Tensor& p : parts) {
      if (p.cols() != cols) shape_fail("concat", parts.front().value(), p.value());
      offsets.push_back(rows);
      rows += p.rows();
      ids.push_back(p.id());
    }
  }
  Matrix out(rows, cols);
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const Matrix& v = parts[k].value();
    for (std::size_t r = 0; r < v.rows(); ++r)
      for (std::size_t c = 0; c < v.cols(); ++c) {
        if (axis == Axis::Cols) {
          out(r, offsets[k] + c) = v(r, c);
        } else {
          out(offsets[k] + r, c) = v(r, c);
        }
      }
  }
  return tape->record(std::move(out), parts, [ids, offsets, axis](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (!t.requires_grad(ids[k])) continue;
      Matrix& gk = t.grad_buffer(ids[k]);
      for (std::size_t r = 0; r < gk.rows(); ++r)
        for (std::size_t c = 0; c < gk.cols(); ++c)
          gk(r, c) += axis == Axis::Cols ? g(r, offsets[k] + c) : g(offsets[k] + r, c);
    }
  });
}

Tensor slice_cols(const Tensor& a, std::size_t begin, std::size_t count) {
  const Matrix& av = a.value();
  if (begin + count > av.cols()) {
    throw ShapeError("slice_cols: columns [" + std::to_string(begin) + ", " +
                     std::to_string(begin + count) + ") out of range for " + av.shape_string());
  }
  Matrix out(av.rows(), count);
  for (std::size_t r = 0; r < av.rows(); ++r)
    for (std::size_t c = 0; c < count; ++c) out(r, c) = av(r, begin + c);
  const std::size_t ia = a.id();
  return a.tape()->record(std::move(out), {a}, [ia, begin](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    Matrix& ga = t.grad_buffer(ia);
    for (std::size_t r = 0; r < g.rows(); ++r)
      for (std::size_t c = 0; c < g.cols(); ++c) ga(r, begin + c) += g(r, c);
  });
}

Tensor gather_rows(const Tensor& a, std::span<const int> index) {
  const Matrix& av = a.value();
  check_index("gather_rows", index, av.rows());
  const std::size_t f = av.cols();
  Matrix out(index.size(), f);
  for (std::size_t e = 0; e < index.size(); ++e) {
    const double* src = av.data() + static_cast<std::size_t>(index[e]) * f;
    std::copy(src, src + f, out.data() + e * f);
  }
  const std::size_t ia = a.id();
  std::vector<int> idx(index.begin(), index.end());
  return a.tape()->record(std::move(out), {a}, [ia, idx = std::move(idx), f](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    Matrix& ga = t.grad_buffer(ia);
    for (std::size_t e = 0; e < idx.size(); ++e) {
      double* dst = ga.data() + static_cast<std::size_t>(idx[e]) * f;
      const double* src = g.data() + e * f;
      for (std::size_t c = 0; c < f; ++c) dst[c] += src[c];
    }
  });
}

Tensor segment_sum(const Tensor& a, std::span<const int> segment, std::size_t num_segments) {
  const Matrix& av = a.value();
  if (segment.size() != av.rows()) {
    throw ShapeError("segment_sum: " + std::to_string(segment.size()) + " segment ids for " +
                     av.shape_string());
  }
  check_index("segment_sum", segment, num_segments);
  const std::size_t f = av.cols();
  Matrix out(num_segments, f);
  for (std::size_t e = 0; e < segment.size(); ++e) {
    double* dst = out.data() + static_cast<std::size_t>(segment[e]) * f;
    const double* src = av.data() + e * f;
    for (std::size_t c = 0; c < f; ++c) dst[c] += src[c];
  }
  const std::size_t ia = a.id();
  std::vector<int> seg(segment.begin(), segment.end());
  return a.tape()->record(std::move(out), {a}, [ia, seg = std::move(seg), f](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    Matrix& ga = t.grad_buffer(ia);
    for (std::size_t e = 0; e < seg.size(); ++e) {
      const double* src = g.data() + static_cast<std::size_t>(seg[e]) * f;
      double* dst = ga.data() + e * f;
      for (std::size_t c = 0; c < f; ++c) dst[c] += src[c];
    }
  });
}

Tensor softmax_over_segments(const Tensor& scores, std::span<const int> segment,
                             std::size_t num_segments) {
  const Matrix& sv = scores.value();
  if (segment.size() != sv.rows()) {
    throw ShapeError("softmax_over_segments: " + std::to_string(segment.size()) +
                     " segment ids for " + sv.shape_string());
  }
  check_index("softmax_over_segments", segment, num_segments);
  const std::size_t cols = sv.cols();
  Matrix seg_max(num_segments, cols, -std::numeric_limits<double>::infinity());
  for (std::size_t e = 0; e < segment.size(); ++e)
    for (std::size_t c = 0; c < cols; ++c)
      seg_max(segment[e], c) = std::max(seg_max(segment[e], c), sv(e, c));
  Matrix out(sv.rows(), cols);
  Matrix denom(num_segments, cols);
  for (std::size_t e = 0; e < segment.size(); ++e)
    for (std::size_t c = 0; c < cols; ++c) {
      out(e, c) = std::exp(sv(e, c) - seg_max(segment[e], c));
      denom(segment[e], c) += out(e, c);
    }
  for (std::size_t e = 0; e < segment.size(); ++e)
    for (std::size_t c = 0; c < cols; ++c) out(e, c) /= denom(segment[e], c);

  const std::size_t is = scores.id();
  std::vector<int> seg(segment.begin(), segment.end());
  return scores.tape()->record(
      std::move(out), {scores},
      [is, seg = std::move(seg), num_segments, cols](Tape& t, std::size_t self) {
        const Matrix& g = t.grad(self);
        const Matrix& y = t.value(self);
        Matrix dot(num_segments, cols);
        for (std::size_t e = 0; e < seg.size(); ++e)
          for (std::size_t c = 0; c < cols; ++c) dot(seg[e], c) += g(e, c) * y(e, c);
        Matrix& gs = t.grad_buffer(is);
        for (std::size_t e = 0; e < seg.size(); ++e)
          for (std::size_t c = 0; c < cols; ++c) gs(e, c) += y(e, c) * (g(e, c) - dot(seg[e], c));
      });
}

}  // namespace nd::ad
