#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "specband/errors.hpp"
#include "specband/graph.hpp"
#include "specband/random.hpp"

namespace specband {

// Erdos-Renyi G(n, p): each unordered pair independently with probability p,
// unit weights. One uniform draw per pair keeps the layout seed-stable.
inline WeightedGraph generate_er(int n, double p, std::uint64_t seed) {
  if (n < 2) throw ParamError("er: need at least 2 nodes");
  if (!(p >= 0.0 && p <= 1.0)) throw ParamError("er: p must lie in [0, 1]");
  Rng rng(derive_seed(seed, 0xE7));
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.uniform01() < p) edges.push_back({u, v, 1.0});
  return WeightedGraph(n, std::move(edges));
}

// Barabasi-Albert preferential attachment. Starts from k0 isolated nodes;
// each new node attaches to m distinct existing nodes drawn with probability
// proportional to degree, where degree 0 counts as 1 so the initial core is
// reachable. Degrees are frozen while one node picks its m targets.
inline WeightedGraph generate_ba(int n, int m, int k0, std::uint64_t seed) {
  if (n < 2) throw ParamError("ba: need at least 2 nodes");
  if (m < 1) throw ParamError("ba: m must be >= 1");
  if (k0 < m) throw ParamError("ba: need k0 >= m");
  if (k0 > n) throw ParamError("ba: need k0 <= n");
  Rng rng(derive_seed(seed, 0xBA));
  std::vector<double> degree(n, 0.0);
  auto weight_of = [&degree](int u) { return degree[u] > 0.0 ? degree[u] : 1.0; };
  std::vector<Edge> edges;
  std::vector<int> targets;
  for (int v = k0; v < n; ++v) {
    double total = 0.0;
    for (int u = 0; u < v; ++u) total += weight_of(u);
    targets.clear();
    while (static_cast<int>(targets.size()) < m) {
      const double x = rng.uniform(0.0, total);
      double acc = 0.0;
      int pick = v - 1;
      for (int u = 0; u < v; ++u) {
        acc += weight_of(u);
        if (x < acc) {
          pick = u;
          break;
        }
      }
      if (std::find(targets.begin(), targets.end(), pick) == targets.end())
        targets.push_back(pick);
    }
    for (int u : targets) {
      edges.push_back({u, v, 1.0});
      degree[u] += 1.0;
      degree[v] += 1.0;
    }
  }
  return WeightedGraph(n, std::move(edges));
}

// Square-ish 2D grid: rows = ceil(sqrt(n)), cols = ceil(n / rows), nodes in
// row-major order, unit-weight edges to the right and downward neighbours.
inline WeightedGraph generate_lattice(int n) {
  if (n < 2) throw ParamError("lattice: need at least 2 nodes");
  int rows = 1;
  while (rows * rows < n) ++rows;
  const int cols = (n + rows - 1) / rows;
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    const int c = i % cols;
    if (c + 1 < cols && i + 1 < n) edges.push_back({i, i + 1, 1.0});
    if (i + cols < n) edges.push_back({i, i + cols, 1.0});
  }
  return WeightedGraph(n, std::move(edges));
}

// K disjoint cliques of M nodes each, unit weights.
inline WeightedGraph generate_blocks(int num_blocks, int block_size) {
  if (num_blocks < 1) throw ParamError("blocks: need at least one block");
  if (block_size < 1) throw ParamError("blocks: block size must be >= 1");
  if (static_cast<long>(num_blocks) * block_size < 2)
    throw ParamError("blocks: need at least 2 nodes");
  std::vector<Edge> edges;
  for (int b = 0; b < num_blocks; ++b) {
    const int base = b * block_size;
    for (int i = 0; i < block_size; ++i)
      for (int j = i + 1; j < block_size; ++j)
        edges.push_back({base + i, base + j, 1.0});
  }
  return WeightedGraph(num_blocks * block_size, std::move(edges));
}

// kNN graph on row vectors: node i connects to its k nearest neighbours by
// Euclidean distance (ties resolved toward the lower index), edges
// symmetrized with unit weights.
inline WeightedGraph knn_graph(const Eigen::MatrixXd& latent, int k) {
  const int n = static_cast<int>(latent.rows());
  if (n < 2) throw ParamError("knn: need at least 2 points");
  if (k < 1 || k >= n) throw ParamError("knn: need 1 <= k < number of points");
  std::vector<Edge> edges;
  std::vector<std::pair<double, int>> dist;
  dist.reserve(n - 1);
  for (int i = 0; i < n; ++i) {
    dist.clear();
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      dist.emplace_back((latent.row(i) - latent.row(j)).squaredNorm(), j);
    }
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    for (int t = 0; t < k; ++t) {
      const int j = dist[t].second;
      edges.push_back({std::min(i, j), std::max(i, j), 1.0});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const Edge& a, const Edge& b) {
                            return a.u == b.u && a.v == b.v;
                          }),
              edges.end());
  return WeightedGraph(n, std::move(edges));
}

}  // namespace specband
