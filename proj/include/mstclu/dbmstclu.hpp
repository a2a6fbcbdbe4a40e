#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "mstclu/common.hpp"
#include "mstclu/graph_stream.hpp"
#include "mstclu/spanning_forest.hpp"

namespace mstclu {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Validity index of one cluster from its separation and dispersion.
inline double validity_index(double sep, double disp) {
  return (sep - disp) / std::max(sep, disp);
}

inline double cluster_term(std::uint32_t size, std::uint32_t n, double validity) {
  return static_cast<double>(size) / static_cast<double>(n) * validity;
}

// Per-candidate-cut statistics for one cluster edge: the two sides an edge
// cut would create, keyed to the edge's canonical (u,v) endpoints.
struct CutScanEntry {
  std::uint32_t edge_idx = 0;
  std::uint32_t size_u = 0;  // side containing the edge's smaller endpoint
  double disp_u = 0.0;
  double sep_u = 0.0;
  std::uint32_t size_v = 0;
  double disp_v = 0.0;
  double sep_v = 0.0;
};
using CutScan = std::vector<CutScanEntry>;

struct ClusterReport {
  std::uint32_t size = 0;
  double sep = 1.0;
  double disp = 0.0;
  double validity = 1.0;
};

struct CutTraceEntry {
  NodeId u = 0;
  NodeId v = 0;
  double w = 0.0;
  double dbcvi_before = 0.0;
  double dbcvi_after = 0.0;
};

struct ClusterPartition {
  std::uint32_t n = 0;
  std::vector<std::uint32_t> assignment;  // node -> cluster label, labels by first occurrence
  std::vector<std::pair<NodeId, NodeId>> cuts;
  std::vector<ClusterReport> clusters;  // indexed by label
  double dbcvi = 0.0;                   // canonical label-order recomputation
  std::vector<CutTraceEntry> trace;

  std::size_t num_clusters() const { return clusters.size(); }
};

// Incremental clustering engine: greedy cut loop over a spanning forest with
// per-cluster cached best candidates and linear-time cut scans.
class ClusterEngine {
 public:
  explicit ClusterEngine(const SpanningForest& forest) : n_(forest.n) {
    if (n_ == 0) throw parameter_error("empty forest");
    edges_.reserve(forest.edges.size());
    for (const auto& e : forest.edges) {
      if (!(e.w > 0.0) || e.w > 1.0) throw weight_range_error("forest weight outside (0,1]");
      Edge ed;
      ed.u = std::min(e.u, e.v);
      ed.v = std::max(e.u, e.v);
      ed.w = e.w;
      ed.id = canonical_edge_id(ed.u, ed.v, n_);
      edges_.push_back(ed);
    }
    adj_.assign(n_, {});
    for (std::uint32_t i = 0; i < edges_.size(); ++i) {
      adj_[edges_[i].u].push_back(i);
      adj_[edges_[i].v].push_back(i);
    }
    node_min_cut_.assign(n_, kInf);
    node_cluster_.assign(n_, 0);
    // initial clusters = forest components, in first-node order
    std::vector<char> seen(n_, 0);
    for (std::uint32_t s = 0; s < n_; ++s) {
      if (seen[s]) continue;
      Cluster c;
      std::vector<std::uint32_t> stack{s};
      seen[s] = 1;
      while (!stack.empty()) {
        std::uint32_t x = stack.back();
        stack.pop_back();
        c.nodes.push_back(x);
        for (std::uint32_t ei : adj_[x]) {
          std::uint32_t y = other_end(ei, x);
          if (!seen[y]) {
            seen[y] = 1;
            stack.push_back(y);
          }
        }
      }
      std::uint32_t idx = static_cast<std::uint32_t>(clusters_.size());
      for (std::uint32_t x : c.nodes) node_cluster_[x] = idx;
      clusters_.push_back(std::move(c));
    }
    // scratch
    parent_edge_.assign(n_, -1);
    size_b_.assign(n_, 0);
    disp_b_.assign(n_, 0.0);
    mincut_b_.assign(n_, kInf);
    up_disp_.assign(n_, 0.0);
    up_mincut_.assign(n_, kInf);
    for (std::size_t i = 0; i < clusters_.size(); ++i) refresh_cluster(static_cast<std::uint32_t>(i));
  }

  std::uint32_t n() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_clusters() const { return clusters_.size(); }
  double running_dbcvi() const { return running_dbcvi_; }

  std::optional<std::uint32_t> edge_index(NodeId u, NodeId v) const {
    for (std::uint32_t ei : adj_[u])
      if (other_end(ei, u) == v) return ei;
    return std::nullopt;
  }

  // Cut scan of the cluster containing start_edge, via two linear sweeps of
  // the cluster subtree (down then up), each edge touched a constant number
  // of times.
  CutScan double_dfs(std::uint32_t start_edge) const {
    if (start_edge >= edges_.size()) throw range_error("edge index out of range");
    if (edges_[start_edge].cut) throw invalid_cut_error("start edge is already cut");
    return scan_cluster(clusters_[node_cluster_[edges_[start_edge].u]],
                        edges_[start_edge].u);
  }

  // DBCVI of the partition obtained by cutting the edge, without mutating
  // state; untouched clusters contribute their cached validity terms.
  double evaluate_cut(std::uint32_t edge_idx) const {
    if (edge_idx >= edges_.size()) throw range_error("edge index out of range");
    const Edge& e = edges_[edge_idx];
    if (e.cut) throw invalid_cut_error("edge already cut");
    std::uint32_t ci = node_cluster_[e.u];
    CutScan scan = scan_cluster(clusters_[ci], clusters_[ci].nodes[0]);
    for (const auto& entry : scan)
      if (entry.edge_idx == edge_idx) return score_candidate(ci, entry);
    throw invalid_cut_error("edge not found in its cluster scan");
  }

  // Global argmax over cached per-cluster champions; the tie rule is
  // last-candidate-wins under an ascending-edge-id scan.
  std::optional<std::pair<std::uint32_t, double>> find_best_cut() const {
    bool have = false;
    double best_score = 0.0;
    std::uint64_t best_id = 0;
    std::uint32_t best_edge = 0;
    for (std::uint32_t ci = 0; ci < clusters_.size(); ++ci) {
      const Cluster& c = clusters_[ci];
      if (!c.has_candidate) continue;
      double score = score_terms(ci, c.cand_t_u, c.cand_t_v);
      std::uint64_t id = edges_[c.cand_edge].id;
      if (!have || score > best_score || (score == best_score && id > best_id)) {
        have = true;
        best_score = score;
        best_id = id;
        best_edge = c.cand_edge;
      }
    }
    if (!have) return std::nullopt;
    return std::make_pair(best_edge, best_score);
  }

  // Apply a cut unconditionally (the greedy loop and SEMST both use this).
  void apply_cut(std::uint32_t edge_idx) {
    Edge& e = edges_[edge_idx];
    if (e.cut) throw invalid_cut_error("edge already cut");
    std::uint32_t ci = node_cluster_[e.u];
    if (node_cluster_[e.v] != ci) throw invalid_cut_error("edge endpoints in different clusters");
    e.cut = true;
    cuts_.push_back(edge_idx);
    node_min_cut_[e.u] = std::min(node_min_cut_[e.u], e.w);
    node_min_cut_[e.v] = std::min(node_min_cut_[e.v], e.w);
    Cluster left = collect_component(e.u);
    Cluster right = collect_component(e.v);
    clusters_.erase(clusters_.begin() + ci);
    for (std::uint32_t i = ci; i < clusters_.size(); ++i)
      for (std::uint32_t x : clusters_[i].nodes) node_cluster_[x] = i;
    std::uint32_t li = static_cast<std::uint32_t>(clusters_.size());
    for (std::uint32_t x : left.nodes) node_cluster_[x] = li;
    clusters_.push_back(std::move(left));
    std::uint32_t ri = static_cast<std::uint32_t>(clusters_.size());
    for (std::uint32_t x : right.nodes) node_cluster_[x] = ri;
    clusters_.push_back(std::move(right));
    refresh_cluster(li);
    refresh_cluster(ri);
  }

  // The greedy loop: accept the best cut while it does not decrease the
  // running index, starting from the worst possible value. The all-singleton
  // partition (K = N) is trivially index-optimal but meaningless, so the loop
  // refuses the final shattering cut.
  void run() {
    while (running_dbcvi_ < 1.0) {
      if (clusters_.size() + 1 >= n_) break;  // any further cut would reach K = N
      auto best = find_best_cut();
      if (!best || best->second < running_dbcvi_) break;
      double before = running_dbcvi_;
      const Edge& e = edges_[best->first];
      trace_.push_back({e.u, e.v, e.w, before, best->second});
      apply_cut(best->first);
      running_dbcvi_ = best->second;
    }
  }

  ClusterPartition partition() const {
    ClusterPartition p;
    p.n = n_;
    p.assignment.assign(n_, 0);
    std::vector<std::int64_t> label(clusters_.size(), -1);
    std::uint32_t next = 0;
    for (std::uint32_t x = 0; x < n_; ++x) {
      std::uint32_t ci = node_cluster_[x];
      if (label[ci] < 0) {
        label[ci] = next++;
        p.clusters.push_back({static_cast<std::uint32_t>(clusters_[ci].nodes.size()),
                              clusters_[ci].sep, clusters_[ci].disp, clusters_[ci].validity});
      }
      p.assignment[x] = static_cast<std::uint32_t>(label[ci]);
    }
    for (std::uint32_t ei : cuts_) p.cuts.emplace_back(edges_[ei].u, edges_[ei].v);
    double dbcvi = 0.0;
    for (std::uint32_t l = 0; l < p.clusters.size(); ++l)
      dbcvi += cluster_term(p.clusters[l].size, n_, p.clusters[l].validity);
    p.dbcvi = dbcvi;
    p.trace = trace_;
    return p;
  }

  struct Edge {
    NodeId u, v;
    double w;
    EdgeId id;
    bool cut = false;
  };
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::uint32_t>& cluster_nodes(std::uint32_t ci) const {
    return clusters_[ci].nodes;
  }
  std::uint32_t cluster_of(NodeId x) const { return node_cluster_[x]; }
  ClusterReport cluster_report(std::uint32_t ci) const {
    const Cluster& c = clusters_[ci];
    return {static_cast<std::uint32_t>(c.nodes.size()), c.sep, c.disp, c.validity};
  }

 private:
  struct Cluster {
    std::vector<std::uint32_t> nodes;
    double disp = 0.0;
    double sep = 1.0;
    double validity = 1.0;
    bool has_candidate = false;
    std::uint32_t cand_edge = 0;
    double cand_t_u = 0.0;
    double cand_t_v = 0.0;
  };

  std::uint32_t other_end(std::uint32_t ei, std::uint32_t x) const {
    const Edge& e = edges_[ei];
    return e.u == x ? e.v : e.u;
  }

  Cluster collect_component(std::uint32_t start) const {
    Cluster c;
    std::vector<char> seen;  // local; cluster sizes are bounded by their parent
    std::vector<std::uint32_t> stack{start};
    std::vector<std::uint32_t> marked;
    // reuse the scratch parent array as a visited marker would race with scans;
    // a small per-call set keyed by node works at these sizes
    std::vector<char>& vis = visit_scratch_;
    if (vis.size() != n_) vis.assign(n_, 0);
    vis[start] = 1;
    marked.push_back(start);
    while (!stack.empty()) {
      std::uint32_t x = stack.back();
      stack.pop_back();
      c.nodes.push_back(x);
      for (std::uint32_t ei : adj_[x]) {
        if (edges_[ei].cut) continue;
        std::uint32_t y = other_end(ei, x);
        if (!vis[y]) {
          vis[y] = 1;
          marked.push_back(y);
          stack.push_back(y);
        }
      }
    }
    for (std::uint32_t x : marked) vis[x] = 0;
    return c;
  }

  void compute_stats(Cluster& c) const {
    double disp = 0.0;
    double mincut = kInf;
    for (std::uint32_t x : c.nodes) {
      mincut = std::min(mincut, node_min_cut_[x]);
      for (std::uint32_t ei : adj_[x])
        if (!edges_[ei].cut) disp = std::max(disp, edges_[ei].w);
    }
    if (c.nodes.size() == 1) disp = 0.0;
    c.disp = disp;
    c.sep = mincut == kInf ? 1.0 : mincut;
    c.validity = validity_index(c.sep, c.disp);
  }

  // stats + champion
  void refresh_cluster(std::uint32_t ci) {
    Cluster& c = clusters_[ci];
    compute_stats(c);
    c.has_candidate = false;
    if (c.nodes.size() < 2) return;
    CutScan scan = scan_cluster(c, c.nodes[0]);
    std::sort(scan.begin(), scan.end(), [this](const CutScanEntry& a, const CutScanEntry& b) {
      return edges_[a.edge_idx].id < edges_[b.edge_idx].id;
    });
    double best_sum = 0.0;
    for (const auto& entry : scan) {
      double t_u = cluster_term(entry.size_u, n_, validity_index(entry.sep_u, entry.disp_u));
      double t_v = cluster_term(entry.size_v, n_, validity_index(entry.sep_v, entry.disp_v));
      double sum = t_u + t_v;
      if (!c.has_candidate || sum >= best_sum) {
        c.has_candidate = true;
        best_sum = sum;
        c.cand_edge = entry.edge_idx;
        c.cand_t_u = t_u;
        c.cand_t_v = t_v;
      }
    }
  }

  // canonical candidate score: untouched clusters in creation order, then the
  // two nascent sides (u side first)
  double score_terms(std::uint32_t ci, double t_u, double t_v) const {
    double score = 0.0;
    for (std::uint32_t j = 0; j < clusters_.size(); ++j) {
      if (j == ci) continue;
      const Cluster& c = clusters_[j];
      score += cluster_term(static_cast<std::uint32_t>(c.nodes.size()), n_, c.validity);
    }
    score += t_u;
    score += t_v;
    return score;
  }

  double score_candidate(std::uint32_t ci, const CutScanEntry& entry) const {
    double t_u = cluster_term(entry.size_u, n_, validity_index(entry.sep_u, entry.disp_u));
    double t_v = cluster_term(entry.size_v, n_, validity_index(entry.sep_v, entry.disp_v));
    return score_terms(ci, t_u, t_v);
  }

  // Two sweeps over the cluster subtree rooted at `root`: a post-order pass
  // accumulating below-side size/dispersion/min-cut, then a pre-order pass
  // propagating the complementary above-side values through sibling
  // prefix/suffix aggregates. Explicit stacks only.
  CutScan scan_cluster(const Cluster& c, std::uint32_t root) const {
    CutScan out;
    if (c.nodes.size() < 2) return out;
    const std::uint32_t csize = static_cast<std::uint32_t>(c.nodes.size());
    // reset scratch for this cluster
    for (std::uint32_t x : c.nodes) {
      parent_edge_[x] = -1;
      size_b_[x] = 1;
      disp_b_[x] = 0.0;
      mincut_b_[x] = node_min_cut_[x];
      up_disp_[x] = 0.0;
      up_mincut_[x] = kInf;
    }
    // iterative DFS pre-order
    std::vector<std::uint32_t> order;
    order.reserve(csize);
    std::vector<std::uint32_t> stack{root};
    parent_edge_[root] = -2;  // root marker
    while (!stack.empty()) {
      std::uint32_t x = stack.back();
      stack.pop_back();
      order.push_back(x);
      for (std::uint32_t ei : adj_[x]) {
        if (edges_[ei].cut) continue;
        std::uint32_t y = other_end(ei, x);
        if (parent_edge_[y] == -1) {
          parent_edge_[y] = static_cast<std::int64_t>(ei);
          stack.push_back(y);
        }
      }
    }
    // post-order accumulation (reverse pre-order)
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      std::uint32_t x = *it;
      if (parent_edge_[x] == -2) continue;
      std::uint32_t ei = static_cast<std::uint32_t>(parent_edge_[x]);
      std::uint32_t p = other_end(ei, x);
      size_b_[p] += size_b_[x];
      disp_b_[p] = std::max(disp_b_[p], std::max(edges_[ei].w, disp_b_[x]));
      mincut_b_[p] = std::min(mincut_b_[p], mincut_b_[x]);
    }
    // pre-order propagation of above-side values
    std::vector<std::uint32_t> child_edges;
    std::vector<double> pref_d, suf_d, pref_m, suf_m;
    for (std::uint32_t p : order) {
      child_edges.clear();
      for (std::uint32_t ei : adj_[p]) {
        if (edges_[ei].cut) continue;
        std::uint32_t y = other_end(ei, p);
        if (parent_edge_[y] == static_cast<std::int64_t>(ei)) child_edges.push_back(ei);
      }
      std::size_t m = child_edges.size();
      if (m == 0) continue;
      // p's own parent edge lies above every child of p
      double base_disp = up_disp_[p];
      if (parent_edge_[p] >= 0)
        base_disp = std::max(base_disp, edges_[static_cast<std::uint32_t>(parent_edge_[p])].w);
      pref_d.assign(m + 1, 0.0);
      pref_m.assign(m + 1, kInf);
      suf_d.assign(m + 1, 0.0);
      suf_m.assign(m + 1, kInf);
      for (std::size_t i = 0; i < m; ++i) {
        std::uint32_t ei = child_edges[i];
        std::uint32_t ch = other_end(ei, p);
        double d = std::max(edges_[ei].w, disp_b_[ch]);
        pref_d[i + 1] = std::max(pref_d[i], d);
        pref_m[i + 1] = std::min(pref_m[i], mincut_b_[ch]);
      }
      for (std::size_t i = m; i-- > 0;) {
        std::uint32_t ei = child_edges[i];
        std::uint32_t ch = other_end(ei, p);
        double d = std::max(edges_[ei].w, disp_b_[ch]);
        suf_d[i] = std::max(suf_d[i + 1], d);
        suf_m[i] = std::min(suf_m[i + 1], mincut_b_[ch]);
      }
      for (std::size_t i = 0; i < m; ++i) {
        std::uint32_t ei = child_edges[i];
        std::uint32_t ch = other_end(ei, p);
        up_disp_[ch] = std::max(base_disp, std::max(pref_d[i], suf_d[i + 1]));
        up_mincut_[ch] =
            std::min({up_mincut_[p], node_min_cut_[p], pref_m[i], suf_m[i + 1]});
      }
    }
    // emit one entry per non-root node's parent edge
    out.reserve(csize - 1);
    for (std::uint32_t x : order) {
      if (parent_edge_[x] == -2) continue;
      std::uint32_t ei = static_cast<std::uint32_t>(parent_edge_[x]);
      const Edge& e = edges_[ei];
      CutScanEntry entry;
      entry.edge_idx = ei;
      std::uint32_t size_below = size_b_[x];
      double disp_below = disp_b_[x];
      double sep_below = std::min(e.w, mincut_b_[x]);
      std::uint32_t size_above = csize - size_below;
      double disp_above = size_above == 1 ? 0.0 : up_disp_[x];
      double sep_above = std::min(e.w, up_mincut_[x]);
      double disp_below_adj = size_below == 1 ? 0.0 : disp_below;
      if (e.u == x) {  // below side holds the smaller endpoint
        entry.size_u = size_below;
        entry.disp_u = disp_below_adj;
        entry.sep_u = sep_below;
        entry.size_v = size_above;
        entry.disp_v = disp_above;
        entry.sep_v = sep_above;
      } else {
        entry.size_u = size_above;
        entry.disp_u = disp_above;
        entry.sep_u = sep_above;
        entry.size_v = size_below;
        entry.disp_v = disp_below_adj;
        entry.sep_v = sep_below;
      }
      out.push_back(entry);
    }
    return out;
  }

  std::uint32_t n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::uint32_t>> adj_;
  std::vector<double> node_min_cut_;
  std::vector<std::uint32_t> node_cluster_;
  std::vector<Cluster> clusters_;
  std::vector<std::uint32_t> cuts_;
  std::vector<CutTraceEntry> trace_;
  double running_dbcvi_ = -1.0;

  // scratch buffers for scan_cluster / collect_component
  mutable std::vector<std::int64_t> parent_edge_;
  mutable std::vector<std::uint32_t> size_b_;
  mutable std::vector<double> disp_b_;
  mutable std::vector<double> mincut_b_;
  mutable std::vector<double> up_disp_;
  mutable std::vector<double> up_mincut_;
  mutable std::vector<char> visit_scratch_;
};

inline ClusterPartition dbmstclu(const SpanningForest& forest) {
  if (forest.n == 0) throw parameter_error("empty forest");
  ClusterEngine engine(forest);
  engine.run();
  return engine.partition();
}

// Baseline: cut the k-1 heaviest forest edges (ties by edge id ascending).
inline ClusterPartition semst(const SpanningForest& forest, std::uint32_t k) {
  if (k < 1 || k > forest.n) throw parameter_error("cluster count out of range");
  ClusterEngine engine(forest);
  if (k - 1 > engine.num_edges()) throw parameter_error("not enough edges for k clusters");
  std::vector<std::uint32_t> idx(engine.num_edges());
  for (std::uint32_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&engine](std::uint32_t a, std::uint32_t b) {
    const auto& ea = engine.edges()[a];
    const auto& eb = engine.edges()[b];
    if (ea.w != eb.w) return ea.w > eb.w;
    return ea.id < eb.id;
  });
  for (std::uint32_t i = 0; i + 1 < k; ++i) engine.apply_cut(idx[i]);
  return engine.partition();
}

}  // namespace mstclu
