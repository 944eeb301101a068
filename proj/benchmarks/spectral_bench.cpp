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


#include <benchmark/benchmark.h>

#include "neural_drawer/graph.hpp"
#include "neural_drawer/spectral.hpp"

namespace nd {
namespace {

// Full Jacobi decomposition of a normalized Laplacian.
void BM_Eigendecompose(benchmark::State& state) {
  const Graph g = generate_er_sparse(static_cast<int>(state.range(0)), 0.1, 3);
  const Matrix l = normalized_laplacian(g);
  for (auto _ : state) benchmark::DoNotOptimize(eigendecompose(l).eigenvalues.data());
  state.counters["nodes"] = g.node_count();
}
BENCHMARK(BM_Eigendecompose)->Arg(20)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_LaplacianPe(benchmark::State& state) {
  const Graph g = generate_er_sparse(static_cast<int>(state.range(0)), 0.05, 9);
  for (auto _ : state) benchmark::DoNotOptimize(laplacian_pe(g, 10).features.data());
}
BENCHMARK(BM_LaplacianPe)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace nd
