#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "mstclu/common.hpp"
#include "mstclu/dbmstclu.hpp"
#include "mstclu/spanning_forest.hpp"

namespace mstclu {

inline std::vector<std::vector<double>> euclidean_dissimilarity(
    const std::vector<std::vector<double>>& points) {
  std::size_t n = points.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = 0;
      for (std::size_t k = 0; k < points[i].size(); ++k) {
        double diff = points[i][k] - points[j][k];
        s += diff * diff;
      }
      d[i][j] = d[j][i] = std::sqrt(s);
    }
  }
  return d;
}

// Mean silhouette coefficient over all points. Singleton clusters contribute
// 0 (noise-as-singleton convention); a == b == 0 also contributes 0.
inline double silhouette(const std::vector<std::vector<double>>& dist,
                         const std::vector<std::uint32_t>& labels) {
  std::size_t n = labels.size();
  if (dist.size() != n) throw parameter_error("dissimilarity matrix size mismatch");
  std::map<std::uint32_t, std::uint32_t> sizes;
  for (auto l : labels) ++sizes[l];
  if (sizes.size() < 2) throw undefined_metric_error("silhouette needs at least 2 clusters");
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t li = labels[i];
    if (sizes[li] == 1) continue;  // contributes 0
    std::map<std::uint32_t, double> sum;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      sum[labels[j]] += dist[i][j];
    }
    double a = sum[li] / static_cast<double>(sizes[li] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (const auto& [l, s] : sum) {
      if (l == li) continue;
      b = std::min(b, s / static_cast<double>(sizes[l]));
    }
    double m = std::max(a, b);
    if (m > 0.0) total += (b - a) / m;
  }
  return total / static_cast<double>(n);
}

inline double silhouette_points(const std::vector<std::vector<double>>& points,
                                const std::vector<std::uint32_t>& labels) {
  return silhouette(euclidean_dissimilarity(points), labels);
}

// Standard pair-counting adjusted Rand index, reported raw (can be < 0).
inline double adjusted_rand_index(const std::vector<std::uint32_t>& labels,
                                  const std::vector<std::uint32_t>& truth) {
  if (labels.size() != truth.size()) throw parameter_error("labeling size mismatch");
  std::size_t n = labels.size();
  if (n < 2) throw undefined_metric_error("adjusted Rand index needs at least 2 points");
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> cont;
  std::map<std::uint32_t, std::uint64_t> rows, cols;
  for (std::size_t i = 0; i < n; ++i) {
    ++cont[{labels[i], truth[i]}];
    ++rows[labels[i]];
    ++cols[truth[i]];
  }
  auto comb2 = [](std::uint64_t x) { return static_cast<double>(x) * (x - 1) / 2.0; };
  double index = 0, a = 0, b = 0;
  for (const auto& [k, c] : cont) index += comb2(c);
  for (const auto& [k, c] : rows) a += comb2(c);
  for (const auto& [k, c] : cols) b += comb2(c);
  double expected = a * b / comb2(n);
  double max_index = (a + b) / 2.0;
  double denom = max_index - expected;
  if (denom == 0.0) return 1.0;  // both labelings trivial and identical in shape
  return (index - expected) / denom;
}

// Score an arbitrary partition of the forest with the validity index,
// treating inter-cluster forest edges as the cut set. Each cluster must be a
// connected subtree. The summation order (ascending label) matches the
// clustering engine's reported value exactly when fed its own assignment.
inline double dbcvi_score(const SpanningForest& forest,
                          const std::vector<std::uint32_t>& labels) {
  std::uint32_t n = forest.n;
  if (labels.size() != n) throw parameter_error("label vector size mismatch");
  if (n == 0) throw parameter_error("empty forest");
  std::vector<double> node_min_cut(n, kInf);
  UnionFind uf(n);
  for (const auto& e : forest.edges) {
    if (!(e.w > 0.0) || e.w > 1.0) throw weight_range_error("forest weight outside (0,1]");
    if (labels[e.u] == labels[e.v]) {
      uf.unite(e.u, e.v);
    } else {
      node_min_cut[e.u] = std::min(node_min_cut[e.u], e.w);
      node_min_cut[e.v] = std::min(node_min_cut[e.v], e.w);
    }
  }
  // each label class must be exactly one connected component of the kept edges
  std::map<std::uint32_t, std::uint32_t> rep;
  for (std::uint32_t x = 0; x < n; ++x) {
    std::uint32_t r = uf.find(x);
    auto it = rep.find(labels[x]);
    if (it == rep.end())
      rep[labels[x]] = r;
    else if (it->second != r)
      throw invalid_partition_error("cluster " + std::to_string(labels[x]) +
                                    " is not connected in the forest");
  }
  struct Stats {
    std::uint64_t size = 0;
    double disp = 0.0;
    double mincut = kInf;
  };
  std::map<std::uint32_t, Stats> stats;
  for (std::uint32_t x = 0; x < n; ++x) {
    Stats& s = stats[labels[x]];
    ++s.size;
    s.mincut = std::min(s.mincut, node_min_cut[x]);
  }
  for (const auto& e : forest.edges)
    if (labels[e.u] == labels[e.v]) {
      Stats& s = stats[labels[e.u]];
      s.disp = std::max(s.disp, e.w);
    }
  double dbcvi = 0.0;
  for (const auto& [l, s] : stats) {
    double sep = s.mincut == kInf ? 1.0 : s.mincut;
    double disp = s.size == 1 ? 0.0 : s.disp;
    dbcvi += cluster_term(static_cast<std::uint32_t>(s.size), n, validity_index(sep, disp));
  }
  return dbcvi;
}

}  // namespace mstclu
