#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "mstclu/common.hpp"
#include "mstclu/graph_stream.hpp"

namespace mstclu {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1), components_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];  // path halving
      x = parent_[x];
    }
    return x;
  }

  // returns false if already united
  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    --components_;
    return true;
  }

  std::size_t components() const { return components_; }

  std::size_t size() const { return parent_.size(); }

  std::uint32_t component_size(std::uint32_t x) { return size_[find(x)]; }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
  std::size_t components_;
};

struct ForestEdge {
  NodeId u;
  NodeId v;
  double w;
};

struct WeightedEdge {
  NodeId u;
  NodeId v;
  double w;
};

// Recovered (or exact) spanning forest over n nodes.
struct SpanningForest {
  std::uint32_t n = 0;
  std::vector<ForestEdge> edges;

  double total_weight() const {
    double s = 0;
    for (const auto& e : edges) s += e.w;
    return s;
  }

  // adjacency as edge indices per node
  std::vector<std::vector<std::uint32_t>> adjacency() const {
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (std::uint32_t i = 0; i < edges.size(); ++i) {
      adj[edges[i].u].push_back(i);
      adj[edges[i].v].push_back(i);
    }
    return adj;
  }

  // canonical edge order: (weight, edge id) ascending
  void sort_edges() {
    std::sort(edges.begin(), edges.end(), [this](const ForestEdge& a, const ForestEdge& b) {
      if (a.w != b.w) return a.w < b.w;
      return canonical_edge_id(a.u, a.v, n) < canonical_edge_id(b.u, b.v, n);
    });
  }
};

// Kruskal with deterministic (weight, edge id) tie-break.
inline SpanningForest exact_mst(std::vector<WeightedEdge> edges, std::uint32_t n) {
  for (const auto& e : edges)
    if (!(e.w > 0.0) || e.w > 1.0) throw weight_range_error("edge weight outside (0,1]");
  std::sort(edges.begin(), edges.end(), [n](const WeightedEdge& a, const WeightedEdge& b) {
    if (a.w != b.w) return a.w < b.w;
    return canonical_edge_id(a.u, a.v, n) < canonical_edge_id(b.u, b.v, n);
  });
  UnionFind uf(n);
  SpanningForest f;
  f.n = n;
  for (const auto& e : edges)
    if (uf.unite(e.u, e.v)) f.edges.push_back({e.u, e.v, e.w});
  return f;
}

// Net edge weights of a turnstile stream (final state). Oracle-side helper.
inline std::vector<WeightedEdge> net_edges(const UpdateStream& s) {
  std::vector<std::pair<EdgeId, double>> acc;
  acc.reserve(s.updates.size());
  for (const auto& e : s.updates)
    acc.emplace_back(canonical_edge_id(e.u, e.v, s.n), e.delta);
  std::sort(acc.begin(), acc.end());
  std::vector<WeightedEdge> out;
  std::size_t i = 0;
  while (i < acc.size()) {
    EdgeId id = acc[i].first;
    double sum = 0;
    while (i < acc.size() && acc[i].first == id) sum += acc[i++].second;
    if (sum > 1e-12) {
      auto [u, v] = edge_endpoints(id, s.n);
      out.push_back({u, v, sum});
    }
  }
  return out;
}

}  // namespace mstclu
