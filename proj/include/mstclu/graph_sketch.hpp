#pragma once

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "mstclu/common.hpp"
#include "mstclu/graph_stream.hpp"
#include "mstclu/l0_sketch.hpp"
#include "mstclu/spanning_forest.hpp"

namespace mstclu {

// All T repetitions at one weight level were consumed before Boruvka
// converged; carries the partition found so far.
struct incomplete_components_error : data_error {
  incomplete_components_error(std::string msg, std::vector<std::uint32_t> partial_)
      : data_error(std::move(msg)), partial(std::move(partial_)) {}
  std::vector<std::uint32_t> partial;
};

// Linear sketch of the whole weighted graph: one NodeSketch per node.
class GraphSketch {
 public:
  GraphSketch(std::uint32_t n, const WeightGrid& grid, std::uint64_t seed, int reps_override = 0,
              int levels_override = 0)
      : cfg_(n, grid, seed, reps_override, levels_override) {
    nodes_.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) nodes_.emplace_back(cfg_);
  }

  explicit GraphSketch(SketchConfig cfg) : cfg_(std::move(cfg)) {
    nodes_.reserve(cfg_.n);
    for (std::uint32_t i = 0; i < cfg_.n; ++i) nodes_.emplace_back(cfg_);
  }

  const SketchConfig& config() const { return cfg_; }
  std::uint32_t n() const { return cfg_.n; }
  std::uint64_t updates_seen() const { return updates_seen_; }
  std::vector<NodeSketch>& nodes() { return nodes_; }
  const std::vector<NodeSketch>& nodes() const { return nodes_; }
  void set_updates_seen(std::uint64_t u) { updates_seen_ = u; }

  // Reconcile the edge's membership in every threshold subgraph: the stream
  // carries w_old, so changed levels are exactly one contiguous range.
  void apply_update(const EdgeUpdate& upd) {
    double w_old = upd.w_old;
    double w_new = upd.w_new();
    int q_old = w_old > 0.0 ? cfg_.grid.quantize(w_old) : -1;
    int q_new = w_new > 0.0 ? cfg_.grid.quantize(w_new) : -1;
    ++updates_seen_;
    if (q_old == q_new) return;
    EdgeId j = canonical_edge_id(upd.u, upd.v, cfg_.n);
    // edge with weight w lives in levels k >= quantize(w)
    int lo, hi, sign_u;
    if (q_old < 0) {  // pure insert into [q_new, r]
      lo = q_new;
      hi = cfg_.grid.levels;
      sign_u = 1;
    } else if (q_new < 0) {  // pure delete from [q_old, r]
      lo = q_old;
      hi = cfg_.grid.levels;
      sign_u = -1;
    } else if (q_new < q_old) {  // weight dropped: insert into [q_new, q_old)
      lo = q_new;
      hi = q_old - 1;
      sign_u = 1;
    } else {  // weight rose: delete from [q_old, q_new)
      lo = q_old;
      hi = q_new - 1;
      sign_u = -1;
    }
    for (int k = lo; k <= hi; ++k) {
      for (int t = 0; t < cfg_.reps; ++t) {
        const auto& p = cfg_.params[cfg_.sampler_index(k, t)];
        std::uint64_t zpow = powmod61(p.z, j);
        nodes_[upd.u].at(cfg_, k, t).update(p, j, sign_u, zpow);
        nodes_[upd.v].at(cfg_, k, t).update(p, j, -sign_u, zpow);
      }
    }
  }

  void apply_stream(const UpdateStream& s) {
    for (const auto& u : s.updates) apply_update(u);
  }

  // Boruvka rounds at one weight level, continuing from the supplied
  // union-find state. Sampled merge edges are appended to out_edges (if
  // non-null). Round t consumes repetition t of this level's samplers.
  void boruvka_level(int level, UnionFind& uf, std::vector<EdgeId>* out_edges) const {
    const std::uint32_t n = cfg_.n;
    for (int t = 0;; ++t) {
      if (uf.components() <= 1) return;
      if (t >= cfg_.reps)
        throw incomplete_components_error(
            "sampler repetitions exhausted at weight level " + std::to_string(level),
            partition_of(uf));
      // merged supernode samplers: counter-wise sums over members
      std::vector<std::int32_t> slot(n, -1);
      std::vector<L0Sampler> super;
      std::vector<std::uint32_t> roots;
      for (std::uint32_t i = 0; i < n; ++i) {
        std::uint32_t r = uf.find(i);
        if (slot[r] < 0) {
          slot[r] = static_cast<std::int32_t>(super.size());
          super.push_back(nodes_[i].at(cfg_, level, t));
          roots.push_back(r);
        } else {
          super[slot[r]].add(nodes_[i].at(cfg_, level, t));
        }
      }
      const auto& params = cfg_.params[cfg_.sampler_index(level, t)];
      bool any_fail = false;
      std::vector<EdgeId> sampled;
      for (std::size_t s = 0; s < super.size(); ++s) {
        auto out = super[s].sample(params);
        if (std::holds_alternative<SampleFail>(out)) {
          any_fail = true;
        } else if (auto* e = std::get_if<SampleEdge>(&out)) {
          sampled.push_back(e->j);
        }
      }
      bool merged = false;
      for (EdgeId j : sampled) {
        auto [u, v] = edge_endpoints(j, n);
        if (uf.unite(u, v)) {
          merged = true;
          if (out_edges) out_edges->push_back(j);
        }
      }
      if (!merged && !any_fail) return;  // every supernode reported Empty or duplicates
      if (!merged && any_fail) continue; // burn another repetition
    }
  }

  // Component partition of the threshold subgraph at the given level.
  // Labels are normalized to [0, cc) in order of first node occurrence.
  std::vector<std::uint32_t> connected_components(int level) const {
    UnionFind uf(cfg_.n);
    boruvka_level(level, uf, nullptr);
    return partition_of(uf);
  }

  std::size_t component_count(int level) const {
    UnionFind uf(cfg_.n);
    boruvka_level(level, uf, nullptr);
    return uf.components();
  }

  // Kruskal-by-level: ascending weight levels, Boruvka merging restricted to
  // each threshold subgraph, merge edges recorded at the level threshold.
  SpanningForest approx_mst() const {
    UnionFind uf(cfg_.n);
    SpanningForest f;
    f.n = cfg_.n;
    for (int k = 0; k <= cfg_.grid.levels; ++k) {
      std::vector<EdgeId> merged;
      boruvka_level(k, uf, &merged);
      double w = cfg_.grid.grid_value(k);
      for (EdgeId j : merged) {
        auto [u, v] = edge_endpoints(j, cfg_.n);
        f.edges.push_back({u, v, w});
      }
    }
    f.sort_edges();
    return f;
  }

  // The telescoping weight estimate from per-level component counts,
  // rescaled by w_min so the grid covers (0,1].
  double mst_weight_estimate() const {
    const double eps = cfg_.grid.eps1;
    const int r = cfg_.grid.levels;
    double acc = static_cast<double>(cfg_.n);
    std::size_t prev_cc = cfg_.n;
    for (int k = 0; k <= r; ++k) {
      std::size_t cc = component_count(k);
      if (cc > prev_cc)
        throw data_error("component count increased across weight levels");
      prev_cc = cc;
      double lambda = std::pow(1.0 + eps, k + 1) - std::pow(1.0 + eps, k);
      acc += lambda * static_cast<double>(cc);
      if (k == r) acc -= std::pow(1.0 + eps, r + 1) * static_cast<double>(cc);
    }
    return cfg_.grid.w_min * acc;
  }

  // Normalize component labels to [0, cc) by first node occurrence.
  static std::vector<std::uint32_t> partition_of(UnionFind& uf) {
    std::vector<std::uint32_t> out(uf.size());
    std::vector<std::int64_t> map(uf.size(), -1);
    std::uint32_t next = 0;
    for (std::uint32_t i = 0; i < uf.size(); ++i) {
      std::uint32_t r = uf.find(i);
      if (map[r] < 0) map[r] = next++;
      out[i] = static_cast<std::uint32_t>(map[r]);
    }
    return out;
  }

 private:
  SketchConfig cfg_;
  std::vector<NodeSketch> nodes_;
  std::uint64_t updates_seen_ = 0;
};

}  // namespace mstclu
