#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "mstclu/common.hpp"
#include "mstclu/graph_stream.hpp"
#include "mstclu/rng.hpp"

namespace mstclu {

// Arithmetic mod p = 2^61 - 1 (Mersenne, fast folding reduction).
inline constexpr std::uint64_t kMersenne61 = (1ULL << 61) - 1;

inline std::uint64_t mod61(std::uint64_t x) {
  x = (x & kMersenne61) + (x >> 61);
  if (x >= kMersenne61) x -= kMersenne61;
  return x;
}

inline std::uint64_t mulmod61(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  std::uint64_t lo = static_cast<std::uint64_t>(p & kMersenne61);
  std::uint64_t hi = static_cast<std::uint64_t>(p >> 61);
  std::uint64_t r = lo + hi;
  if (r >= kMersenne61) r -= kMersenne61;
  return r;
}

inline std::uint64_t addmod61(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = a + b;
  if (r >= kMersenne61) r -= kMersenne61;
  return r;
}

inline std::uint64_t submod61(std::uint64_t a, std::uint64_t b) {
  return a >= b ? a - b : a + kMersenne61 - b;
}

inline std::uint64_t powmod61(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  base = mod61(base);
  while (exp) {
    if (exp & 1) r = mulmod61(r, base);
    base = mulmod61(base, base);
    exp >>= 1;
  }
  return r;
}

// Three linear functionals of one level's virtual signed vector:
// phi = sum v_j, iota = sum j*v_j, tau = sum v_j * z^j mod p.
struct OneSparseCell {
  std::int64_t phi = 0;
  std::int64_t iota = 0;
  std::uint64_t tau = 0;

  bool is_zero() const { return phi == 0 && iota == 0 && tau == 0; }

  // zpow = z^j mod p, precomputed by the caller (shared across cells)
  void update(EdgeId j, int sign, std::uint64_t zpow) {
    phi += sign;
    iota += sign * static_cast<std::int64_t>(j);
    tau = sign > 0 ? addmod61(tau, zpow) : submod61(tau, zpow);
  }

  void add(const OneSparseCell& o) {
    phi += o.phi;
    iota += o.iota;
    tau = addmod61(tau, o.tau);
  }

  bool operator==(const OneSparseCell&) const = default;
};

struct RecoverZero {};
struct RecoverOneSparse {
  EdgeId j;
  int sign;
};
struct RecoverNotOneSparse {};
using RecoverOutcome = std::variant<RecoverZero, RecoverOneSparse, RecoverNotOneSparse>;

// One-sparse test from the three counters, with the z-fingerprint check.
inline RecoverOutcome recover_one_sparse(const OneSparseCell& c, std::uint64_t z,
                                         std::uint64_t num_coords) {
  if (c.is_zero()) return RecoverZero{};
  if (c.phi == 1 || c.phi == -1) {
    std::int64_t j = c.iota * c.phi;  // iota / phi with phi = +-1
    if (j >= 0 && static_cast<std::uint64_t>(j) < num_coords) {
      std::uint64_t expect = powmod61(z, static_cast<std::uint64_t>(j));
      if (c.phi < 0) expect = submod61(0, expect);
      if (c.tau == expect) return RecoverOneSparse{static_cast<EdgeId>(j), c.phi > 0 ? 1 : -1};
    }
  }
  return RecoverNotOneSparse{};
}

struct SampleEmpty {};
struct SampleEdge {
  EdgeId j;
  int sign;
};
struct SampleFail {};
using SampleOutcome = std::variant<SampleEmpty, SampleEdge, SampleFail>;

// Per-sampler shared configuration. Samplers at the same (weight level,
// repetition) position share seed and z across all nodes so counters stay
// linear under node-sketch merging.
struct SamplerParams {
  std::uint64_t seed;
  std::uint64_t z;
};

// Level of coordinate j under a sampler seed: number of low zero bits of the
// mixed hash, capped at max_level. Coordinate j lives in cells 0..level(j).
inline int coord_level(std::uint64_t seed, EdgeId j, int max_level) {
  std::uint64_t h = mix64(seed ^ (j * 0x9e3779b97f4a7c15ULL) ^ 0x6a09e667f3bcc909ULL);
  int l = std::countr_zero(h);
  return l < max_level ? l : max_level;
}

// One l0-sampler: L geometric levels of one-sparse cells over a virtual
// vector of dimension num_coords.
class L0Sampler {
 public:
  L0Sampler() = default;
  L0Sampler(int num_levels, std::uint64_t num_coords)
      : cells_(num_levels), num_coords_(num_coords) {}

  int num_levels() const { return static_cast<int>(cells_.size()); }
  std::uint64_t num_coords() const { return num_coords_; }
  const std::vector<OneSparseCell>& cells() const { return cells_; }
  std::vector<OneSparseCell>& cells() { return cells_; }

  void update(const SamplerParams& params, EdgeId j, int sign, std::uint64_t zpow) {
    int top = coord_level(params.seed, j, num_levels() - 1);
    for (int l = 0; l <= top; ++l) cells_[l].update(j, sign, zpow);
  }

  void update(const SamplerParams& params, EdgeId j, int sign) {
    update(params, j, sign, powmod61(params.z, j));
  }

  void add(const L0Sampler& o) {
    for (std::size_t l = 0; l < cells_.size(); ++l) cells_[l].add(o.cells_[l]);
  }

  // Scan levels bottom-up and return the first one-sparse recovery.
  SampleOutcome sample(const SamplerParams& params) const {
    if (cells_.empty() || cells_[0].is_zero()) return SampleEmpty{};
    for (const auto& cell : cells_) {
      auto out = recover_one_sparse(cell, params.z, num_coords_);
      if (auto* one = std::get_if<RecoverOneSparse>(&out))
        return SampleEdge{one->j, one->sign};
    }
    return SampleFail{};
  }

  bool is_zero() const {
    for (const auto& c : cells_)
      if (!c.is_zero()) return false;
    return true;
  }

 private:
  std::vector<OneSparseCell> cells_;
  std::uint64_t num_coords_ = 0;
};

// Shared configuration of a whole graph sketch: weight grid, repetition and
// level counts, and per-(weight level, repetition) sampler parameters.
struct SketchConfig {
  std::uint32_t n = 0;
  std::uint64_t m = 0;  // virtual vector dimension = n(n-1)/2
  WeightGrid grid;
  int reps = 0;        // T: independent samplers per (node, weight level)
  int levels_l = 0;    // L: cells per sampler
  std::uint64_t master_seed = 0;
  std::vector<SamplerParams> params;  // (grid.levels+1) * reps entries

  SketchConfig() = default;
  SketchConfig(std::uint32_t n_, const WeightGrid& g, std::uint64_t seed, int reps_override = 0,
               int levels_override = 0)
      : n(n_), m(num_edges(n_)), grid(g), master_seed(seed) {
    if (n < 2) throw parameter_error("sketch needs n >= 2");
    int logm = 0;
    while ((1ULL << logm) < m) ++logm;
    levels_l = levels_override > 0 ? levels_override : logm + 3;
    int logn = 0;
    while ((1u << logn) < n) ++logn;
    reps = reps_override > 0 ? reps_override : logn + 3;
    std::uint64_t s = seed;
    params.resize(static_cast<std::size_t>(grid.levels + 1) * reps);
    for (auto& p : params) {
      p.seed = splitmix64(s);
      p.z = 2 + splitmix64(s) % (kMersenne61 - 3);
    }
  }

  std::size_t sampler_index(int weight_level, int rep) const {
    return static_cast<std::size_t>(weight_level) * reps + rep;
  }

  std::size_t cells_per_node() const {
    return static_cast<std::size_t>(grid.levels + 1) * reps * levels_l;
  }

  bool compatible(const SketchConfig& o) const {
    return n == o.n && m == o.m && grid == o.grid && reps == o.reps && levels_l == o.levels_l &&
           master_seed == o.master_seed;
  }
};

// Per-node sketch: (grid levels+1) x reps l0-samplers over the node's signed
// incidence vector restricted to each threshold subgraph.
class NodeSketch {
 public:
  NodeSketch() = default;
  explicit NodeSketch(const SketchConfig& cfg) {
    samplers_.reserve(cfg.params.size());
    for (std::size_t i = 0; i < cfg.params.size(); ++i)
      samplers_.emplace_back(cfg.levels_l, cfg.m);
  }

  L0Sampler& at(const SketchConfig& cfg, int weight_level, int rep) {
    return samplers_[cfg.sampler_index(weight_level, rep)];
  }
  const L0Sampler& at(const SketchConfig& cfg, int weight_level, int rep) const {
    return samplers_[cfg.sampler_index(weight_level, rep)];
  }

  std::vector<L0Sampler>& samplers() { return samplers_; }
  const std::vector<L0Sampler>& samplers() const { return samplers_; }

  bool is_zero() const {
    for (const auto& s : samplers_)
      if (!s.is_zero()) return false;
    return true;
  }

 private:
  std::vector<L0Sampler> samplers_;
};

// Counter-wise sum; both operands must come from the same configuration.
inline NodeSketch merge(const SketchConfig& cfg_a, const NodeSketch& a, const SketchConfig& cfg_b,
                        const NodeSketch& b) {
  if (!cfg_a.compatible(cfg_b)) throw incompatible_sketch_error("sketch configs differ");
  NodeSketch out = a;
  for (std::size_t i = 0; i < out.samplers().size(); ++i)
    out.samplers()[i].add(b.samplers()[i]);
  return out;
}

}  // namespace mstclu
