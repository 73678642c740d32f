#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "specband/errors.hpp"
#include "specband/io.hpp"

namespace specband {

struct Edge {
  int u;
  int v;
  double w;
};

inline bool operator==(const Edge& a, const Edge& b) {
  return a.u == b.u && a.v == b.v && a.w == b.w;
}

namespace detail {

// Union-find with path halving; roots are kept minimal so component labels
// come out ordered by first node index.
class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<int> parent_;
};

}  // namespace detail

// Undirected weighted graph on nodes 0..n-1. Edges are stored once with
// u < v, sorted lexicographically, weights strictly positive, no self-loops,
// no duplicates. Immutable after construction and safe to share across
// threads.
class WeightedGraph {
 public:
  WeightedGraph(int num_nodes, std::vector<Edge> edges)
      : n_(num_nodes), edges_(std::move(edges)) {
    if (n_ < 1) throw ParamError("graph: need at least one node");
    for (auto& e : edges_) {
      if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_)
        throw ParamError("graph: edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                         ") out of range for " + std::to_string(n_) + " nodes");
      if (e.u == e.v) throw ParamError("graph: self-loop on node " + std::to_string(e.u));
      if (!(e.w > 0.0) || !std::isfinite(e.w))
        throw ParamError("graph: weight of edge (" + std::to_string(e.u) + ", " +
                         std::to_string(e.v) + ") must be positive and finite");
      if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
      return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    for (std::size_t i = 1; i < edges_.size(); ++i) {
      if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v)
        throw ParamError("graph: duplicate edge (" + std::to_string(edges_[i].u) + ", " +
                         std::to_string(edges_[i].v) + ")");
    }
    detail::DisjointSets ds(n_);
    for (const auto& e : edges_) ds.unite(e.u, e.v);
    component_.resize(n_);
    std::vector<int> remap(n_, -1);
    n_components_ = 0;
    for (int v = 0; v < n_; ++v) {
      const int r = ds.find(v);
      if (remap[r] < 0) remap[r] = n_components_++;
      component_[v] = remap[r];
    }
  }

  static WeightedGraph empty(int num_nodes) { return WeightedGraph(num_nodes, {}); }

  int num_nodes() const { return n_; }
  long num_edges() const { return static_cast<long>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  int component_count() const { return n_components_; }
  const std::vector<int>& component_labels() const { return component_; }

  // Weighted degree d_i = sum_j w_ij.
  Eigen::VectorXd degrees() const {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n_);
    for (const auto& e : edges_) {
      d[e.u] += e.w;
      d[e.v] += e.w;
    }
    return d;
  }

  // FNV-1a over node count and the normalized edge list (weight bit patterns),
  // used by run manifests to identify the input graph.
  std::uint64_t content_hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t x) {
      for (int i = 0; i < 8; ++i) {
        h ^= (x >> (8 * i)) & 0xffu;
        h *= 1099511628211ULL;
      }
    };
    mix(static_cast<std::uint64_t>(n_));
    mix(static_cast<std::uint64_t>(edges_.size()));
    for (const auto& e : edges_) {
      mix(static_cast<std::uint64_t>(e.u));
      mix(static_cast<std::uint64_t>(e.v));
      std::uint64_t bits;
      std::memcpy(&bits, &e.w, sizeof bits);
      mix(bits);
    }
    return h;
  }

  bool operator==(const WeightedGraph& o) const {
    return n_ == o.n_ && edges_ == o.edges_;
  }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> component_;
  int n_components_ = 0;
};

// L = D - W; symmetric, zero row sums, positive semi-definite.
inline Eigen::MatrixXd build_laplacian(const WeightedGraph& g) {
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(g.num_nodes(), g.num_nodes());
  for (const auto& e : g.edges()) {
    L(e.u, e.u) += e.w;
    L(e.v, e.v) += e.w;
    L(e.u, e.v) -= e.w;
    L(e.v, e.u) -= e.w;
  }
  return L;
}

// Text format: first significant line is the node count, then one edge per
// line as "u v w" (0-based indices); '#' starts a comment line; blank lines
// are ignored.
inline WeightedGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open graph file: " + path);
  std::string line;
  long line_no = 0;
  auto fail = [&](const std::string& what) -> void {
    throw DataError(path + ":" + std::to_string(line_no) + ": " + what);
  };
  int n = -1;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t pos = line.find_first_not_of(" \t");
    if (pos == std::string::npos || line[pos] == '#') continue;
    std::istringstream ss(line);
    std::string rest;
    if (n < 0) {
      if (!(ss >> n) || n < 1) fail("expected a positive node count");
      if (ss >> rest) fail("trailing characters after node count");
      continue;
    }
    Edge e{};
    if (!(ss >> e.u >> e.v >> e.w)) fail("expected an edge line 'u v w'");
    if (ss >> rest) fail("trailing characters after edge");
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) fail("node index out of range");
    if (e.u == e.v) fail("self-loop");
    if (!(e.w > 0.0) || !std::isfinite(e.w)) fail("weight must be positive and finite");
    edges.push_back(e);
  }
  if (n < 0) throw DataError(path + ": missing node-count line");
  try {
    return WeightedGraph(n, std::move(edges));
  } catch (const ParamError& e) {
    throw DataError(path + ": " + e.what());  // duplicate edges etc.
  }
}

inline void save_graph(const WeightedGraph& g, const std::string& path) {
  std::string s = std::to_string(g.num_nodes());
  s += '\n';
  for (const auto& e : g.edges()) {
    s += std::to_string(e.u);
    s += ' ';
    s += std::to_string(e.v);
    s += ' ';
    s += format_double_exact(e.w);
    s += '\n';
  }
  atomic_write_text(path, s);
}

}  // namespace specband
