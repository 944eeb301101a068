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

#ifndef NEURAL_DRAWER_SPECTRAL_HPP
#define NEURAL_DRAWER_SPECTRAL_HPP

#include <vector>

#include "neural_drawer/graph.hpp"
#include "neural_drawer/matrix.hpp"

namespace nd {

/// I - D^{-1/2} A D^{-1/2}. Throws GraphError on an isolated node.
Matrix normalized_laplacian(const Graph& g);

/// D - A.
Matrix unnormalized_laplacian(const Graph& g);

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  Matrix eigenvectors;              // column j pairs with eigenvalues[j]
};

/// Full spectrum of a symmetric matrix by cyclic Jacobi rotations.
/// Throws std::invalid_argument if m is not symmetric within 1e-12.
EigenDecomposition eigendecompose(const Matrix& m);

/// Flips the sign of each column so its largest-magnitude entry is positive;
/// near-ties go to the lowest row index.
void apply_sign_convention(Matrix& columns);

/// Laplacian positional encoding: the k eigenvectors of the normalized
/// Laplacian that follow the trivial ones (eigenvalue below 1e-8 * max).
struct LaplacianPE {
  Matrix features;  // N x k, unit-norm columns, ascending eigenvalue
  std::vector<double> eigenvalues;
  int k = 0;
};

/// Throws std::invalid_argument when k >= N.
LaplacianPE laplacian_pe(const Graph& g, int k);

/// Same as laplacian_pe but returns zero columns for the positions that do
/// not exist on small graphs, so every graph yields N x k features.
Matrix laplacian_pe_padded(const Graph& g, int k);

/// Second and third eigenvectors of D - A as coordinates, each axis rescaled
/// to [-1, 1]; a constant axis maps to 0. Requires N >= 3.
Layout spectral_layout(const Graph& g);

}  // namespace nd

#endif  // NEURAL_DRAWER_SPECTRAL_HPP
