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

#include "neural_drawer/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "neural_drawer/errors.hpp"

namespace nd {

Graph::Graph(int node_count, std::span<const std::pair<int, int>> edges) : n_(node_count) {
  if (node_count < 0) throw GraphError("Graph: negative node count");
  edges_.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n_ || b >= n_) {
      throw GraphError("Graph: edge (" + std::to_string(a) + ", " + std::to_string(b) +
                       ") out of range for " + std::to_string(n_) + " nodes");
    }
    if (a == b) throw GraphError("Graph: self-loop at node " + std::to_string(a));
    edges_.push_back(Edge{std::min(a, b), std::max(a, b)});
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  std::vector<int> degree(static_cast<std::size_t>(n_), 0);
  for (const Edge& e : edges_) {
    ++degree[e.u];
    ++degree[e.v];
  }
  offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
  for (int i = 0; i < n_; ++i) offsets_[i + 1] = offsets_[i] + degree[i];
  adjacency_.resize(static_cast<std::size_t>(offsets_[n_]));
  std::vector<int> cursor(offsets_.begin(), offsets_.end() - 1);
  // Sorted edges give sorted neighbor lists.
  for (const Edge& e : edges_) adjacency_[cursor[e.u]++] = e.v;
  for (const Edge& e : edges_) adjacency_[cursor[e.v]++] = e.u;
  for (int i = 0; i < n_; ++i) {
    std::sort(adjacency_.begin() + offsets_[i], adjacency_.begin() + offsets_[i + 1]);
  }
}

bool Graph::has_edge(int a, int b) const noexcept {
  if (a < 0 || b < 0 || a >= n_ || b >= n_) return false;
  auto nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

bool Graph::is_connected() const {
  if (n_ <= 1) return true;
  std::vector<char> seen(static_cast<std::size_t>(n_), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : neighbors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == n_;
}

Graph Graph::relabeled(std::span<const int> permutation) const {
  if (permutation.size() != static_cast<std::size_t>(n_)) {
    throw GraphError("Graph::relabeled: permutation size mismatch");
  }
  std::vector<std::pair<int, int>> mapped;
  mapped.reserve(edges_.size());
  for (const Edge& e : edges_) mapped.emplace_back(permutation[e.u], permutation[e.v]);
  return Graph(n_, mapped);
}

Graph path_graph(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph(n, e);
}

Graph cycle_graph(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return Graph(n, e);
}

Graph complete_graph(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph(n, e);
}

Graph star_graph(int leaves) {
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return Graph(leaves + 1, e);
}

ComponentExtraction largest_component(const Graph& g) {
  const int n = g.node_count();
  std::vector<int> label(static_cast<std::size_t>(n), -1);
  int best_label = -1;
  int best_size = 0;
  int next_label = 0;
  for (int s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    int size = 0;
    std::vector<int> stack{s};
    label[s] = next_label;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      ++size;
      for (int w : g.neighbors(v)) {
        if (label[w] < 0) {
          label[w] = next_label;
          stack.push_back(w);
        }
      }
    }
    if (size > best_size) {
      best_size = size;
      best_label = next_label;
    }
    ++next_label;
  }

  ComponentExtraction out;
  std::vector<int> new_id(static_cast<std::size_t>(n), -1);
  for (int v = 0; v < n; ++v) {
    if (label[v] == best_label) {
      new_id[v] = static_cast<int>(out.original_ids.size());
      out.original_ids.push_back(v);
    }
  }
  std::vector<std::pair<int, int>> kept;
  for (const Edge& e : g.edges()) {
    if (new_id[e.u] >= 0 && new_id[e.v] >= 0) kept.emplace_back(new_id[e.u], new_id[e.v]);
  }
  out.graph = Graph(best_size, kept);
  out.dropped_nodes = best_size < n;
  return out;
}

DistanceMatrix::DistanceMatrix(int n, std::vector<int> distances)
    : n_(n), d_(std::move(distances)) {
  if (d_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    throw ShapeError("DistanceMatrix: size mismatch");
  }
}

int DistanceMatrix::diameter() const noexcept {
  return d_.empty() ? 0 : *std::max_element(d_.begin(), d_.end());
}

DistanceMatrix bfs_all_pairs(const Graph& g) {
  const int n = g.node_count();
  std::vector<int> d(static_cast<std::size_t>(n) * n, -1);
  std::vector<int> queue(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    int* row = d.data() + static_cast<std::size_t>(s) * n;
    std::size_t head = 0;
    std::size_t tail = 0;
    queue[tail++] = s;
    row[s] = 0;
    while (head < tail) {
      const int v = queue[head++];
      for (int w : g.neighbors(v)) {
        if (row[w] < 0) {
          row[w] = row[v] + 1;
          queue[tail++] = w;
        }
      }
    }
    if (tail != static_cast<std::size_t>(n)) {
      for (int t = 0; t < n; ++t) {
        if (row[t] < 0) {
          throw GraphError("bfs_all_pairs: graph is disconnected; node " + std::to_string(t) +
                           " unreachable from node " + std::to_string(s));
        }
      }
    }
  }
  return DistanceMatrix(n, std::move(d));
}

Graph sample_gnp(int n, double p, Rng& rng) {
  if (n < 0) throw std::invalid_argument("sample_gnp: negative n");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("sample_gnp: p must lie in (0, 1)");
  std::vector<std::pair<int, int>> edges;
  const double log_q = std::log1p(-p);
  long long v = 1;
  long long w = -1;
  while (v < n) {
    const double log_r = std::log1p(-rng.uniform());
    w += 1 + static_cast<long long>(std::floor(log_r / log_q));
    while (w >= v && v < n) {
      w -= v;
      ++v;
    }
    if (v < n) edges.emplace_back(static_cast<int>(v), static_cast<int>(w));
  }
  return Graph(n, edges);
}

namespace {
constexpr int kMaxGeneratorRetries = 64;
}

Graph generate_er_sparse(int n, double p, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("generate_er_sparse: n must be at least 2");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("generate_er_sparse: p must lie in (0, 1)");
  for (int attempt = 0; attempt < kMaxGeneratorRetries; ++attempt) {
    Rng rng(seed + static_cast<std::uint64_t>(attempt));
    ComponentExtraction lc = largest_component(sample_gnp(n, p, rng));
    if (lc.graph.node_count() >= 2) return std::move(lc.graph);
  }
  throw GraphError("generate_er_sparse: no component with two or more nodes after " +
                   std::to_string(kMaxGeneratorRetries) + " retries");
}

Graph generate_er_component(int min_nodes, int max_nodes, double p, std::uint64_t seed) {
  if (min_nodes < 2 || max_nodes < min_nodes) {
    throw std::invalid_argument("generate_er_component: invalid size range");
  }
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("generate_er_component: p must lie in (0, 1)");
  Rng rng(seed);
  const auto lo = static_cast<std::int64_t>(std::max<double>(max_nodes, std::ceil(1.0 / p)));
  const auto hi = std::max<std::int64_t>(lo, static_cast<std::int64_t>(std::ceil(1.3 / p)));
  for (int attempt = 0; attempt < 4096; ++attempt) {
    const auto n = static_cast<int>(rng.uniform_int(lo, hi));
    ComponentExtraction lc = largest_component(sample_gnp(n, p, rng));
    const int m = lc.graph.node_count();
    if (m >= min_nodes && m <= max_nodes) return std::move(lc.graph);
  }
  throw GraphError("generate_er_component: no component of the requested size found");
}

std::string_view split_name(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Validation: return "val";
    case Split::Test: return "test";
  }
  return "?";
}

std::vector<std::size_t> GraphDataset::indices(Split s) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < splits.size(); ++i)
    if (splits[i] == s) out.push_back(i);
  return out;
}

std::vector<Split> assign_splits(std::size_t count, std::uint64_t seed) {
  const auto n_val = static_cast<std::size_t>(std::floor(0.10 * static_cast<double>(count)));
  const auto n_test = static_cast<std::size_t>(std::floor(0.15 * static_cast<double>(count)));
  std::vector<std::size_t> order(count);
  for (std::size_t i = 0; i < count; ++i) order[i] = i;
  Rng rng(derive_seed(seed, 0x5917));
  rng.shuffle(std::span<std::size_t>(order));
  std::vector<Split> splits(count, Split::Train);
  for (std::size_t k = 0; k < n_val; ++k) splits[order[k]] = Split::Validation;
  for (std::size_t k = n_val; k < n_val + n_test; ++k) splits[order[k]] = Split::Test;
  return splits;
}

GraphDataset build_sparse_dataset(std::size_t count, std::uint64_t seed) {
  if (count == 0) throw std::invalid_argument("build_sparse_dataset: count must be at least 1");
  GraphDataset ds;
  ds.seed = seed;
  ds.graphs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, i));
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 1000) throw GraphError("build_sparse_dataset: retry budget exhausted");
      const auto n = static_cast<int>(rng.uniform_int(20, 100));
      double p;
      do {
        p = rng.uniform(0.01, 0.05);
      } while (p <= 0.01);
      Graph raw = sample_gnp(n, p, rng);
      if (n > 60 && raw.edge_count() > 120) continue;
      ComponentExtraction lc = largest_component(raw);
      if (lc.graph.node_count() < 2) continue;
      ds.graphs.push_back(std::move(lc.graph));
      break;
    }
  }
  ds.splits = assign_splits(count, seed);
  return ds;
}

namespace {

bool parse_int(std::string_view token, int& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

}  // namespace

LoadedGraph load_edge_list(std::string_view text) {
  int n = -1;
  std::vector<std::pair<int, int>> edges;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    auto tokens = split_ws(line);
    if (tokens.empty() || tokens.front().front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    if (n < 0) {
      if (tokens.size() != 1 || !parse_int(tokens[0], n) || n < 0) {
        throw ParseError(line_no, "expected node count");
      }
    } else {
      int u = 0;
      int v = 0;
      if (tokens.size() != 2 || !parse_int(tokens[0], u) || !parse_int(tokens[1], v)) {
        throw ParseError(line_no, "expected \"u v\"");
      }
      if (u < 0 || v < 0 || u >= n || v >= n) {
        throw ParseError(line_no, "node index out of range [0, " + std::to_string(n) + ")");
      }
      if (u == v) throw ParseError(line_no, "self-loop at node " + std::to_string(u));
      edges.emplace_back(u, v);
    }
    if (end == text.size()) break;
  }
  if (n <= 0) throw ParseError(line_no, "empty graph");
  ComponentExtraction lc = largest_component(Graph(n, edges));
  return LoadedGraph{std::move(lc.graph), std::move(lc.original_ids), lc.dropped_nodes};
}

std::string to_edge_list(const Graph& g) {
  std::ostringstream out;
  out << g.node_count() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
  return out.str();
}

std::uint64_t fingerprint(const Graph& g) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t x) {
    for (int b = 0; b < 8; ++b) {
      h ^= (x >> (8 * b)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  mix(static_cast<std::uint64_t>(g.node_count()));
  for (const Edge& e : g.edges()) {
    mix(static_cast<std::uint64_t>(e.u));
    mix(static_cast<std::uint64_t>(e.v));
  }
  return h;
}

}  // namespace nd
