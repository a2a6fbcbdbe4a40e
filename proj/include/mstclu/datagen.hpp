#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "mstclu/common.hpp"
#include "mstclu/graph_stream.hpp"
#include "mstclu/rng.hpp"

namespace mstclu {

struct PointCloud {
  std::vector<std::vector<double>> points;
  std::vector<std::uint32_t> labels;  // ground truth
};

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

namespace detail {

// pad the 2 signal dimensions with (dims-2) low-amplitude Gaussian noise dims
inline std::vector<double> embed(double x, double y, std::uint32_t dims, double ambient_sigma,
                                 Rng& rng) {
  std::vector<double> p(dims, 0.0);
  p[0] = x;
  if (dims > 1) p[1] = y;
  for (std::uint32_t k = 2; k < dims; ++k) p[k] = ambient_sigma * rng.gaussian();
  return p;
}

}  // namespace detail

// Two concentric circles (radius 1 and 0.5), balanced classes, additive
// Gaussian noise on the signal dims and independent noise dims.
inline PointCloud gen_circles(std::uint32_t n, std::uint32_t dims = 20, double noise = 0.05,
                              double ambient_sigma = 0.02, std::uint64_t seed = 1) {
  if (n < 2 || dims < 2) throw parameter_error("circles: need n >= 2, dims >= 2");
  if (noise < 0 || ambient_sigma < 0) throw parameter_error("circles: negative noise");
  PointCloud pc;
  Rng rng(seed);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::uint32_t label = i % 2;
    double radius = label == 0 ? 1.0 : 0.5;
    double theta = rng.uniform() * kTwoPi;
    double x = radius * std::cos(theta) + noise * rng.gaussian();
    double y = radius * std::sin(theta) + noise * rng.gaussian();
    pc.points.push_back(detail::embed(x, y, dims, ambient_sigma, rng));
    pc.labels.push_back(label);
  }
  return pc;
}

// Two interleaving half-circles.
inline PointCloud gen_moons(std::uint32_t n, std::uint32_t dims = 20, double noise = 0.05,
                            double ambient_sigma = 0.02, std::uint64_t seed = 1) {
  if (n < 2 || dims < 2) throw parameter_error("moons: need n >= 2, dims >= 2");
  if (noise < 0 || ambient_sigma < 0) throw parameter_error("moons: negative noise");
  PointCloud pc;
  Rng rng(seed);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::uint32_t label = i % 2;
    double t = rng.uniform() * (kTwoPi / 2.0);
    double x, y;
    if (label == 0) {
      x = std::cos(t);
      y = std::sin(t);
    } else {
      x = 1.0 - std::cos(t);
      y = 0.5 - std::sin(t);
    }
    x += noise * rng.gaussian();
    y += noise * rng.gaussian();
    pc.points.push_back(detail::embed(x, y, dims, ambient_sigma, rng));
    pc.labels.push_back(label);
  }
  return pc;
}

// k isotropic Gaussian blobs on a circle of centers.
inline PointCloud gen_blobs(std::uint32_t n, std::uint32_t k = 3, std::uint32_t dims = 20,
                            double noise = 0.05, double ambient_sigma = 0.02,
                            std::uint64_t seed = 1) {
  if (n < 2 || dims < 2 || k < 1) throw parameter_error("blobs: need n >= 2, dims >= 2, k >= 1");
  if (noise < 0 || ambient_sigma < 0) throw parameter_error("blobs: negative noise");
  PointCloud pc;
  Rng rng(seed);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::uint32_t label = i % k;
    double theta = kTwoPi * label / k;
    double x = 2.0 * std::cos(theta) + noise * rng.gaussian();
    double y = 2.0 * std::sin(theta) + noise * rng.gaussian();
    pc.points.push_back(detail::embed(x, y, dims, ambient_sigma, rng));
    pc.labels.push_back(label);
  }
  return pc;
}

struct SbmSpec {
  std::uint32_t n = 0;
  std::uint32_t k = 1;
  double p_in = 0.3;
  double p_out = 0.01;
  double w_in_lo = 0.05, w_in_hi = 0.2;
  double w_out_lo = 0.6, w_out_hi = 1.0;
  std::uint64_t seed = 1;
};

namespace detail {

// geometric skip sampling: indices of a Bernoulli(p) subset of [0, count)
template <typename Fn>
inline void bernoulli_indices(std::uint64_t count, double p, Rng& rng, Fn&& emit) {
  if (p <= 0.0 || count == 0) return;
  if (p >= 1.0) {
    for (std::uint64_t i = 0; i < count; ++i) emit(i);
    return;
  }
  double log1mp = std::log1p(-p);
  std::uint64_t i = 0;
  while (true) {
    double u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    double skip = std::floor(std::log(u) / log1mp);
    if (skip >= static_cast<double>(count - i)) return;
    i += static_cast<std::uint64_t>(skip);
    emit(i);
    if (++i >= count) return;
  }
}

}  // namespace detail

// Stochastic block model with contiguous equal-sized blocks; node i belongs
// to block i/(n/k). Intra-block edges draw low weights, inter-block high.
// Emitted as an insert-only stream sorted by edge id; block-presence and
// per-edge weight randomness are independent streams of the seed, so output
// is a pure function of the spec.
inline UpdateStream gen_sbm(const SbmSpec& spec, std::vector<std::uint32_t>* truth = nullptr) {
  if (spec.n < 2 || spec.k < 1) throw parameter_error("sbm: need n >= 2, k >= 1");
  if (spec.n % spec.k != 0) throw parameter_error("sbm: k must divide n");
  if (spec.p_in < 0 || spec.p_in > 1 || spec.p_out < 0 || spec.p_out > 1)
    throw parameter_error("sbm: probabilities must be in [0,1]");
  auto check_range = [](double lo, double hi) {
    return lo > 0 && hi <= 1.0 && lo <= hi;
  };
  if (!check_range(spec.w_in_lo, spec.w_in_hi) || !check_range(spec.w_out_lo, spec.w_out_hi))
    throw parameter_error("sbm: weight ranges must lie in (0,1]");
  const std::uint32_t bs = spec.n / spec.k;  // block size
  Rng root(spec.seed);
  Rng weight_root = root.fork(0x77656967687473ULL);
  std::vector<EdgeId> present;
  // intra-block pairs, one Bernoulli stream per block
  for (std::uint32_t b = 0; b < spec.k; ++b) {
    Rng rng = root.fork(0x1000 + b);
    std::uint64_t pairs = static_cast<std::uint64_t>(bs) * (bs - 1) / 2;
    detail::bernoulli_indices(pairs, spec.p_in, rng, [&](std::uint64_t idx) {
      auto [lu, lv] = edge_endpoints(idx, bs);
      present.push_back(canonical_edge_id(b * bs + lu, b * bs + lv, spec.n));
    });
  }
  // inter-block pairs, one stream per ordered block pair
  for (std::uint32_t b1 = 0; b1 < spec.k; ++b1) {
    for (std::uint32_t b2 = b1 + 1; b2 < spec.k; ++b2) {
      Rng rng = root.fork((0x2000ULL + b1) * 0x10001ULL + b2);
      std::uint64_t pairs = static_cast<std::uint64_t>(bs) * bs;
      detail::bernoulli_indices(pairs, spec.p_out, rng, [&](std::uint64_t idx) {
        std::uint32_t lu = static_cast<std::uint32_t>(idx / bs);
        std::uint32_t lv = static_cast<std::uint32_t>(idx % bs);
        present.push_back(canonical_edge_id(b1 * bs + lu, b2 * bs + lv, spec.n));
      });
    }
  }
  std::sort(present.begin(), present.end());
  UpdateStream s;
  s.n = spec.n;
  s.updates.reserve(present.size());
  for (EdgeId id : present) {
    auto [u, v] = edge_endpoints(id, spec.n);
    bool intra = (u / bs) == (v / bs);
    Rng wr = weight_root.fork(id);
    double w = intra ? wr.uniform(spec.w_in_lo, spec.w_in_hi)
                     : wr.uniform(spec.w_out_lo, spec.w_out_hi);
    s.updates.push_back(make_update(u, v, 0.0, w));
  }
  if (truth) {
    truth->assign(spec.n, 0);
    for (std::uint32_t i = 0; i < spec.n; ++i) (*truth)[i] = i / bs;
  }
  return s;
}

enum class Metric { euclidean, hamming };

// Dense dissimilarity stream over all pairs, normalized into (0,1] by the
// max pairwise distance; exact-zero distances clamp to w_min. Batch only:
// the normalizer needs the full point set.
inline UpdateStream build_dissimilarity_stream(const std::vector<std::vector<double>>& points,
                                               Metric metric = Metric::euclidean,
                                               double w_min = 1e-3) {
  std::uint64_t n = points.size();
  if (n < 2) throw parameter_error("need at least 2 points");
  if (!(w_min > 0 && w_min <= 1)) throw parameter_error("w_min must be in (0,1]");
  if (metric == Metric::hamming)
    for (const auto& p : points)
      for (double x : p)
        if (x != 0.0 && x != 1.0) throw parameter_error("hamming metric needs binary features");
  std::vector<double> d;
  d.reserve(num_edges(n));
  double dmax = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    for (std::uint64_t j = i + 1; j < n; ++j) {
      double dist = 0.0;
      if (metric == Metric::euclidean) {
        for (std::size_t k = 0; k < points[i].size(); ++k) {
          double diff = points[i][k] - points[j][k];
          dist += diff * diff;
        }
        dist = std::sqrt(dist);
      } else {
        for (std::size_t k = 0; k < points[i].size(); ++k)
          if (points[i][k] != points[j][k]) dist += 1.0;
      }
      d.push_back(dist);
      dmax = std::max(dmax, dist);
    }
  }
  if (dmax == 0.0) throw degenerate_dataset_error("all points identical");
  UpdateStream s;
  s.n = static_cast<std::uint32_t>(n);
  s.updates.reserve(d.size());
  std::size_t idx = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      double w = d[idx++] / dmax;
      if (w < w_min) w = w_min;
      s.updates.push_back(make_update(i, j, 0.0, w));
    }
  }
  return s;
}

}  // namespace mstclu
