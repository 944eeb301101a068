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

#ifndef NEURAL_DRAWER_GRAPH_HPP
#define NEURAL_DRAWER_GRAPH_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "neural_drawer/rng.hpp"

namespace nd {

/// Undirected edge stored with u < v.
struct Edge {
  int u = 0;
  int v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable undirected simple graph. Edges are sorted and deduplicated;
/// self-loops and out-of-range endpoints are rejected at construction.
class Graph {
 public:
  Graph() = default;
  Graph(int node_count, std::span<const std::pair<int, int>> edges);

  int node_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const int> neighbors(int node) const noexcept {
    return {adjacency_.data() + offsets_[node],
            static_cast<std::size_t>(offsets_[node + 1] - offsets_[node])};
  }
  int degree(int node) const noexcept { return offsets_[node + 1] - offsets_[node]; }
  bool has_edge(int a, int b) const noexcept;
  bool is_connected() const;

  /// Graph with node i renamed to permutation[i].
  Graph relabeled(std::span<const int> permutation) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> offsets_{0};
  std::vector<int> adjacency_;
};

Graph path_graph(int n);
Graph cycle_graph(int n);
Graph complete_graph(int n);
Graph star_graph(int leaves);

struct ComponentExtraction {
  Graph graph;
  /// original_ids[new index] = index in the input graph.
  std::vector<int> original_ids;
  bool dropped_nodes = false;
};

/// Largest connected component relabeled to 0..m-1 in increasing original
/// order. Ties go to the component containing the lowest node index.
ComponentExtraction largest_component(const Graph& g);

/// Symmetric matrix of unweighted shortest-path lengths.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(int n, std::vector<int> distances);

  int size() const noexcept { return n_; }
  int operator()(int i, int j) const noexcept { return d_[static_cast<std::size_t>(i) * n_ + j]; }
  std::span<const int> values() const noexcept { return d_; }
  int diameter() const noexcept;

 private:
  int n_ = 0;
  std::vector<int> d_;
};

/// Exact all-pairs BFS. Throws GraphError naming an unreachable pair if g is
/// disconnected.
DistanceMatrix bfs_all_pairs(const Graph& g);

/// Raw G(n, p) sample by Batagelj-Brandes geometric skip sampling.
Graph sample_gnp(int n, double p, Rng& rng);

/// Largest component of a G(n, p) sample. If it has fewer than two nodes the
/// draw is repeated with the next seed, up to a bounded number of retries.
Graph generate_er_sparse(int n, double p, std::uint64_t seed);

/// Largest component of a G(n, p) sample whose size lies in
/// [min_nodes, max_nodes]; n is drawn near the giant-component threshold
/// 1/p so that components of that size are common.
Graph generate_er_component(int min_nodes, int max_nodes, double p, std::uint64_t seed);

enum class Split { Train, Validation, Test };
std::string_view split_name(Split s);

struct GraphDataset {
  std::vector<Graph> graphs;
  std::vector<Split> splits;
  std::uint64_t seed = 0;

  std::vector<std::size_t> indices(Split s) const;
};

/// Assigns floor(ratio * count) graphs to each split after a seeded shuffle;
/// the remainder goes to the training split.
std::vector<Split> assign_splits(std::size_t count, std::uint64_t seed);

/// Sparse-style dataset: n uniform in [20, 100], p uniform in (0.01, 0.05),
/// samples with more than 60 nodes and more than 120 edges redrawn, largest
/// component kept, 75/10/15 split.
GraphDataset build_sparse_dataset(std::size_t count, std::uint64_t seed);

struct LoadedGraph {
  Graph graph;
  std::vector<int> original_ids;
  bool dropped_nodes = false;
};

/// Parses the edge-list text format: first line node count, then "u v" lines,
/// '#' comment lines. Keeps the largest component.
LoadedGraph load_edge_list(std::string_view text);
std::string to_edge_list(const Graph& g);

/// FNV-1a over node count and edge list.
std::uint64_t fingerprint(const Graph& g);

}  // namespace nd

#endif  // NEURAL_DRAWER_GRAPH_HPP
