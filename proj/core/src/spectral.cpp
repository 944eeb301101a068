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

#include "neural_drawer/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "neural_drawer/errors.hpp"

namespace nd {

Matrix normalized_laplacian(const Graph& g) {
  const int n = g.node_count();
  Matrix l(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  std::vector<double> inv_sqrt_deg(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (g.degree(i) == 0) {
      throw GraphError("normalized_laplacian: node " + std::to_string(i) + " is isolated");
    }
    inv_sqrt_deg[i] = 1.0 / std::sqrt(static_cast<double>(g.degree(i)));
    l(i, i) = 1.0;
  }
  for (const Edge& e : g.edges()) {
    const double w = -inv_sqrt_deg[e.u] * inv_sqrt_deg[e.v];
    l(e.u, e.v) = w;
    l(e.v, e.u) = w;
  }
  return l;
}

Matrix unnormalized_laplacian(const Graph& g) {
  const int n = g.node_count();
  Matrix l(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) l(i, i) = g.degree(i);
  for (const Edge& e : g.edges()) {
    l(e.u, e.v) = -1.0;
    l(e.v, e.u) = -1.0;
  }
  return l;
}

EigenDecomposition eigendecompose(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eigendecompose: matrix is not square");
  const std::size_t n = m.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(m(i, j) - m(j, i)) > 1e-12) {
        throw std::invalid_argument("eigendecompose: matrix is not symmetric at (" +
                                    std::to_string(i) + ", " + std::to_string(j) + ")");
      }

  Matrix a = m;
  Matrix v = Matrix::identity(n);
  double total = 0.0;
  for (double x : a.values()) total += x * x;
  const double target = total * 1e-32;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off <= target || off == 0.0) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&a](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });
  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.eigenvalues[j] = a(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, order[j]);
  }
  return out;
}

void apply_sign_convention(Matrix& columns) {
  for (std::size_t c = 0; c < columns.cols(); ++c) {
    double largest = 0.0;
    for (std::size_t r = 0; r < columns.rows(); ++r) largest = std::max(largest, std::abs(columns(r, c)));
    if (largest == 0.0) continue;
    for (std::size_t r = 0; r < columns.rows(); ++r) {
      if (std::abs(columns(r, c)) >= largest * (1.0 - 1e-9)) {
        if (columns(r, c) < 0.0) {
          for (std::size_t k = 0; k < columns.rows(); ++k) columns(k, c) = -columns(k, c);
        }
        break;
      }
    }
  }
}

namespace {

std::size_t count_trivial(const std::vector<double>& eigenvalues) {
  const double largest = eigenvalues.empty() ? 0.0 : std::abs(eigenvalues.back());
  std::size_t z = 0;
  while (z < eigenvalues.size() && eigenvalues[z] < 1e-8 * largest) ++z;
  return z;
}

}  // namespace

LaplacianPE laplacian_pe(const Graph& g, int k) {
  const int n = g.node_count();
  if (k < 1 || k >= n) {
    throw std::invalid_argument("laplacian_pe: k = " + std::to_string(k) +
                                " must lie in [1, N - 1] for N = " + std::to_string(n));
  }
  EigenDecomposition eig = eigendecompose(normalized_laplacian(g));
  const std::size_t skip = count_trivial(eig.eigenvalues);
  if (skip + static_cast<std::size_t>(k) > static_cast<std::size_t>(n)) {
    throw GraphError("laplacian_pe: only " + std::to_string(n - static_cast<int>(skip)) +
                     " non-trivial eigenvectors available");
  }
  LaplacianPE pe;
  pe.k = k;
  pe.features = Matrix(static_cast<std::size_t>(n), static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    pe.eigenvalues.push_back(eig.eigenvalues[skip + j]);
    for (int i = 0; i < n; ++i) pe.features(i, j) = eig.eigenvectors(i, skip + j);
  }
  apply_sign_convention(pe.features);
  return pe;
}

Matrix laplacian_pe_padded(const Graph& g, int k) {
  const int n = g.node_count();
  if (k < 1) throw std::invalid_argument("laplacian_pe_padded: k must be positive");
  Matrix out(static_cast<std::size_t>(n), static_cast<std::size_t>(k));
  if (n < 2) return out;
  EigenDecomposition eig = eigendecompose(normalized_laplacian(g));
  const std::size_t skip = count_trivial(eig.eigenvalues);
  const std::size_t available = static_cast<std::size_t>(n) - skip;
  const std::size_t used = std::min<std::size_t>(available, static_cast<std::size_t>(k));
  Matrix cols(static_cast<std::size_t>(n), used);
  for (std::size_t j = 0; j < used; ++j)
    for (int i = 0; i < n; ++i) cols(i, j) = eig.eigenvectors(i, skip + j);
  apply_sign_convention(cols);
  for (int i = 0; i < n; ++i)
    for (std::size_t j = 0; j < used; ++j) out(i, j) = cols(i, j);
  return out;
}

Layout spectral_layout(const Graph& g) {
  const int n = g.node_count();
  if (n < 3) throw GraphError("spectral_layout: needs at least 3 nodes, got " + std::to_string(n));
  EigenDecomposition eig = eigendecompose(unnormalized_laplacian(g));
  Matrix coords(static_cast<std::size_t>(n), 2);
  for (int i = 0; i < n; ++i) {
    coords(i, 0) = eig.eigenvectors(i, 1);
    coords(i, 1) = eig.eigenvectors(i, 2);
  }
  apply_sign_convention(coords);
  for (std::size_t c = 0; c < 2; ++c) {
    double lo = coords(0, c);
    double hi = coords(0, c);
    for (int i = 1; i < n; ++i) {
      lo = std::min(lo, coords(i, c));
      hi = std::max(hi, coords(i, c));
    }
    const double range = hi - lo;
    for (int i = 0; i < n; ++i) {
      coords(i, c) = range > 1e-12 ? 2.0 * (coords(i, c) - lo) / range - 1.0 : 0.0;
    }
  }
  return coords;
}

}  // namespace nd
