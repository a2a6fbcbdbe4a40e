// Independent reference implementations used to cross-check the library.
// Everything here is deliberately simple and quadratic: correctness over
// speed.
#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "mstclu/dbmstclu.hpp"
#include "mstclu/graph_sketch.hpp"
#include "mstclu/graph_stream.hpp"
#include "mstclu/rng.hpp"
#include "mstclu/spanning_forest.hpp"

namespace oracle {

using mstclu::EdgeId;
using mstclu::NodeId;
using mstclu::SpanningForest;

// plain union-find components of an explicit edge list
inline std::vector<std::uint32_t> components_of(std::uint32_t n,
                                                const std::vector<std::pair<NodeId, NodeId>>& edges) {
  mstclu::UnionFind uf(n);
  for (auto [u, v] : edges) uf.unite(u, v);
  return mstclu::GraphSketch::partition_of(uf);
}

// minimum spanning forest weight by exhaustive subset enumeration (tiny n)
inline double brute_msf_weight(std::uint32_t n, const std::vector<mstclu::WeightedEdge>& edges) {
  std::size_t m = edges.size();
  // target component count with all edges present
  mstclu::UnionFind all(n);
  for (const auto& e : edges) all.unite(e.u, e.v);
  std::size_t target_cc = all.components();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
    mstclu::UnionFind uf(n);
    double w = 0;
    bool acyclic = true;
    for (std::size_t i = 0; i < m && acyclic; ++i) {
      if (!(mask >> i & 1)) continue;
      if (!uf.unite(edges[i].u, edges[i].v)) acyclic = false;
      w += edges[i].w;
    }
    if (acyclic && uf.components() == target_cc) best = std::min(best, w);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Reference clustering engine: no incremental state, every quantity is
// recomputed from scratch by full scans; every candidate cut of every
// cluster is re-evaluated each round.
// ---------------------------------------------------------------------------
class NaiveClusterer {
 public:
  explicit NaiveClusterer(const SpanningForest& forest) : n_(forest.n) {
    for (const auto& e : forest.edges) {
      Edge ed;
      ed.u = std::min(e.u, e.v);
      ed.v = std::max(e.u, e.v);
      ed.w = e.w;
      ed.id = mstclu::canonical_edge_id(ed.u, ed.v, n_);
      edges_.push_back(ed);
    }
    // initial clusters = components, first-node order (DFS like the engine)
    std::vector<char> seen(n_, 0);
    for (std::uint32_t s = 0; s < n_; ++s) {
      if (seen[s]) continue;
      clusters_.push_back(component_from(s, seen));
    }
  }

  struct Edge {
    NodeId u, v;
    double w;
    EdgeId id;
    bool cut = false;
  };

  double run_and_final_dbcvi() {
    run();
    return current_dbcvi();
  }

  void run() {
    while (dbcvi_ < 1.0) {
      if (clusters_.size() + 1 >= n_) break;  // never shatter into all singletons
      auto best = best_cut();
      if (!best || best->second < dbcvi_) break;
      apply_cut(best->first);
      dbcvi_ = best->second;
      cut_sequence_.push_back(best->first);
      dbcvi_sequence_.push_back(best->second);
    }
  }

  // full rescan over all uncut edges, ascending canonical edge id, >= wins
  std::optional<std::pair<std::size_t, double>> best_cut() const {
    std::vector<std::size_t> order(edges_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [this](std::size_t a, std::size_t b) { return edges_[a].id < edges_[b].id; });
    std::optional<std::pair<std::size_t, double>> best;
    for (std::size_t i : order) {
      if (edges_[i].cut) continue;
      double s = score_cut(i);
      if (!best || s >= best->second) best = {i, s};
    }
    return best;
  }

  // DBCVI of the partition that would result from cutting edge i
  double score_cut(std::size_t i) const {
    std::size_t ci = cluster_containing(edges_[i].u);
    auto [left, right] = split(ci, i);
    double score = 0.0;
    for (std::size_t j = 0; j < clusters_.size(); ++j) {
      if (j == ci) continue;
      score += term(clusters_[j], std::nullopt);
    }
    score += term(left, i);
    score += term(right, i);
    return score;
  }

  void apply_cut(std::size_t i) {
    std::size_t ci = cluster_containing(edges_[i].u);
    auto [left, right] = split(ci, i);
    edges_[i].cut = true;
    clusters_.erase(clusters_.begin() + ci);
    clusters_.push_back(left);
    clusters_.push_back(right);
  }

  double current_dbcvi() const {
    // label order = first node occurrence
    std::vector<std::int64_t> label(clusters_.size(), -1);
    std::vector<std::size_t> order;
    std::uint32_t next = 0;
    for (std::uint32_t x = 0; x < n_; ++x) {
      std::size_t ci = cluster_containing(x);
      if (label[ci] < 0) {
        label[ci] = next++;
        order.push_back(ci);
      }
    }
    double dbcvi = 0.0;
    for (std::size_t ci : order) dbcvi += term(clusters_[ci], std::nullopt);
    return dbcvi;
  }

  std::vector<std::uint32_t> assignment() const {
    std::vector<std::int64_t> label(clusters_.size(), -1);
    std::vector<std::uint32_t> out(n_);
    std::uint32_t next = 0;
    for (std::uint32_t x = 0; x < n_; ++x) {
      std::size_t ci = cluster_containing(x);
      if (label[ci] < 0) label[ci] = next++;
      out[x] = static_cast<std::uint32_t>(label[ci]);
    }
    return out;
  }

  // per-cluster stats by full scans; pending_cut is treated as already cut
  double disp_of(const std::vector<std::uint32_t>& nodes,
                 std::optional<std::size_t> pending_cut) const {
    if (nodes.size() == 1) return 0.0;
    std::vector<char> in(n_, 0);
    for (auto x : nodes) in[x] = 1;
    double d = 0.0;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      if (edges_[i].cut || (pending_cut && *pending_cut == i)) continue;
      if (in[edges_[i].u] && in[edges_[i].v]) d = std::max(d, edges_[i].w);
    }
    return d;
  }

  double sep_of(const std::vector<std::uint32_t>& nodes,
                std::optional<std::size_t> pending_cut) const {
    std::vector<char> in(n_, 0);
    for (auto x : nodes) in[x] = 1;
    double s = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      bool is_cut = edges_[i].cut || (pending_cut && *pending_cut == i);
      if (!is_cut) continue;
      if (in[edges_[i].u] || in[edges_[i].v]) s = std::min(s, edges_[i].w);
    }
    return s == std::numeric_limits<double>::infinity() ? 1.0 : s;
  }

  const std::vector<std::size_t>& cut_sequence() const { return cut_sequence_; }
  const std::vector<double>& dbcvi_sequence() const { return dbcvi_sequence_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t num_clusters() const { return clusters_.size(); }
  double dbcvi() const { return dbcvi_; }

 private:
  double term(const std::vector<std::uint32_t>& nodes, std::optional<std::size_t> pending) const {
    double sep = sep_of(nodes, pending);
    double disp = disp_of(nodes, pending);
    return mstclu::cluster_term(static_cast<std::uint32_t>(nodes.size()), n_,
                                mstclu::validity_index(sep, disp));
  }

  std::size_t cluster_containing(std::uint32_t x) const {
    for (std::size_t i = 0; i < clusters_.size(); ++i)
      for (auto y : clusters_[i])
        if (y == x) return i;
    return 0;
  }

  std::vector<std::uint32_t> component_from(std::uint32_t s, std::vector<char>& seen,
                                            std::optional<std::size_t> skip = {}) const {
    std::vector<std::uint32_t> nodes;
    std::vector<std::uint32_t> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      std::uint32_t x = stack.back();
      stack.pop_back();
      nodes.push_back(x);
      for (std::size_t i = 0; i < edges_.size(); ++i) {
        if (edges_[i].cut || (skip && *skip == i)) continue;
        std::uint32_t y;
        if (edges_[i].u == x)
          y = edges_[i].v;
        else if (edges_[i].v == x)
          y = edges_[i].u;
        else
          continue;
        if (!seen[y]) {
          seen[y] = 1;
          stack.push_back(y);
        }
      }
    }
    return nodes;
  }

  std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> split(std::size_t ci,
                                                                          std::size_t i) const {
    std::vector<char> seen(n_, 1);
    for (auto x : clusters_[ci]) seen[x] = 0;
    auto left = component_from(edges_[i].u, seen, i);
    auto right = component_from(edges_[i].v, seen, i);
    return {left, right};
  }

  std::uint32_t n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::uint32_t>> clusters_;  // creation order
  double dbcvi_ = -1.0;
  std::vector<std::size_t> cut_sequence_;
  std::vector<double> dbcvi_sequence_;
};

// random tree over n nodes with the given weights source
inline SpanningForest random_tree(std::uint32_t n, mstclu::Rng& rng, double w_lo = 0.01,
                                  double w_hi = 1.0) {
  SpanningForest f;
  f.n = n;
  for (std::uint32_t v = 1; v < n; ++v) {
    std::uint32_t u = static_cast<std::uint32_t>(rng.uniform_int(v));
    f.edges.push_back({u, v, rng.uniform(w_lo, w_hi)});
  }
  return f;
}

}  // namespace oracle
