#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mstclu/common.hpp"

namespace mstclu {

using EdgeId = std::uint64_t;

inline std::uint64_t num_edges(std::uint64_t n) { return n * (n - 1) / 2; }

// Lexicographic rank of the unordered pair {u,v} among all pairs of [0,n).
inline EdgeId canonical_edge_id(NodeId u, NodeId v, std::uint64_t n) {
  if (u == v) throw degenerate_edge_error("self-loop (" + std::to_string(u) + ")");
  if (u >= n || v >= n)
    throw range_error("node id out of range for n=" + std::to_string(n));
  std::uint64_t a = u < v ? u : v;
  std::uint64_t b = u < v ? v : u;
  // pairs starting with 0..a-1, then offset within row a
  return a * (2 * n - a - 1) / 2 + (b - a - 1);
}

inline std::pair<NodeId, NodeId> edge_endpoints(EdgeId id, std::uint64_t n) {
  if (id >= num_edges(n)) throw range_error("edge id out of range");
  // invert the triangular rank: find row a
  // row a spans ids [a(2n-a-1)/2, (a+1)(2n-a-2)/2)
  double nd = static_cast<double>(n);
  double idd = static_cast<double>(id);
  // solve a^2 - (2n-1)a + 2*id >= 0 boundary
  std::uint64_t a = static_cast<std::uint64_t>(
      std::floor((2 * nd - 1 - std::sqrt((2 * nd - 1) * (2 * nd - 1) - 8 * idd)) / 2));
  // guard against FP slop
  while (a > 0 && a * (2 * n - a - 1) / 2 > id) --a;
  while ((a + 1) * (2 * n - a - 2) / 2 <= id) ++a;
  std::uint64_t b = a + 1 + (id - a * (2 * n - a - 1) / 2);
  return {static_cast<NodeId>(a), static_cast<NodeId>(b)};
}

// Geometric weight grid over (0,1]: level k represents threshold
// min(w_min*(1+eps1)^k, 1). Level r is the first level whose raw threshold
// reaches 1.
struct WeightGrid {
  double eps1 = 0.1;
  double w_min = 1e-3;
  int levels = 0;  // r: grid_value(levels) >= 1 > grid_value(levels-1)

  WeightGrid() : WeightGrid(0.1, 1e-3) {}
  WeightGrid(double eps, double wmin) : eps1(eps), w_min(wmin) {
    if (!(eps1 > 0)) throw parameter_error("eps1 must be > 0");
    if (!(w_min > 0 && w_min <= 1)) throw parameter_error("w_min must be in (0,1]");
    int r = static_cast<int>(std::ceil(-std::log(w_min) / std::log1p(eps1)));
    while (r > 0 && raw(r - 1) >= 1.0) --r;
    while (raw(r) < 1.0) ++r;
    levels = r;
  }

  double raw(int k) const { return w_min * std::pow(1.0 + eps1, k); }

  double grid_value(int k) const {
    double v = raw(k);
    return v < 1.0 ? v : 1.0;
  }

  // smallest k with grid_value(k) >= w; weights below w_min clamp to level 0
  int quantize(double w) const {
    if (!(w > 0.0) || w > 1.0)
      throw weight_range_error("weight " + std::to_string(w) + " outside (0,1]");
    if (w <= w_min) return 0;
    int k = static_cast<int>(std::floor(std::log(w / w_min) / std::log1p(eps1)));
    if (k < 0) k = 0;
    if (k > levels) k = levels;
    while (k > 0 && grid_value(k - 1) >= w) --k;
    while (grid_value(k) < w) ++k;
    return k;
  }

  bool operator==(const WeightGrid&) const = default;
};

// One turnstile stream element.
struct EdgeUpdate {
  NodeId u = 0;  // canonical: u < v
  NodeId v = 0;
  double w_old = 0.0;
  double delta = 0.0;

  double w_new() const { return w_old + delta; }
};

inline EdgeUpdate make_update(NodeId u, NodeId v, double w_old, double delta) {
  if (u == v) throw degenerate_edge_error("self-loop update");
  EdgeUpdate e;
  e.u = u < v ? u : v;
  e.v = u < v ? v : u;
  e.w_old = w_old;
  e.delta = delta;
  double w = e.w_new();
  if (w < 0.0) throw weight_range_error("negative resulting weight");
  if (w > 1.0) throw weight_range_error("resulting weight > 1");
  if (w_old < 0.0 || w_old > 1.0) throw weight_range_error("w_old outside [0,1]");
  return e;
}

struct UpdateStream {
  std::uint32_t n = 0;
  std::vector<EdgeUpdate> updates;
};

// Text wire format: header "N <count>", then "u v w_old delta" lines.
// '#' starts a comment, blank lines ignored.
inline UpdateStream parse_stream(std::istream& in) {
  UpdateStream s;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    if (!have_header) {
      std::string tag;
      if (!(ls >> tag)) continue;  // blank/comment line before header
      std::uint64_t n;
      if (tag != "N" || !(ls >> n)) throw parse_error("expected header 'N <count>'", lineno);
      s.n = static_cast<std::uint32_t>(n);
      have_header = true;
      continue;
    }
    std::uint64_t u, v;
    double w_old, delta;
    if (!(ls >> u)) continue;
    if (!(ls >> v >> w_old >> delta))
      throw parse_error("malformed update line", lineno);
    std::string extra;
    if (ls >> extra) throw parse_error("trailing tokens on update line", lineno);
    if (u >= s.n || v >= s.n) throw parse_error("node id out of range", lineno);
    try {
      s.updates.push_back(make_update(static_cast<NodeId>(u), static_cast<NodeId>(v), w_old, delta));
    } catch (const data_error& e) {
      throw parse_error(e.what(), lineno);
    } catch (const parameter_error& e) {
      throw parse_error(e.what(), lineno);
    }
  }
  if (!have_header) throw data_error("stream has no 'N <count>' header");
  return s;
}

inline void serialize_stream(const UpdateStream& s, std::ostream& out) {
  out << "N " << s.n << "\n";
  char buf[128];
  for (const auto& e : s.updates) {
    std::snprintf(buf, sizeof(buf), "%u %u %.17g %.17g\n", e.u, e.v, e.w_old, e.delta);
    out << buf;
  }
}

// Binary variant: little-endian u32 N, then records (u32,u32,f64,f64).
inline void write_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

inline void write_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

inline void write_f64(std::ostream& out, double d) {
  std::uint64_t v;
  std::memcpy(&v, &d, 8);
  write_u64(out, v);
}

inline void write_i64(std::ostream& out, std::int64_t v) {
  write_u64(out, static_cast<std::uint64_t>(v));
}

inline std::uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw data_error("truncated binary input");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

inline std::uint64_t read_u64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) throw data_error("truncated binary input");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

inline double read_f64(std::istream& in) {
  std::uint64_t v = read_u64(in);
  double d;
  std::memcpy(&d, &v, 8);
  return d;
}

inline std::int64_t read_i64(std::istream& in) {
  return static_cast<std::int64_t>(read_u64(in));
}

inline void serialize_stream_binary(const UpdateStream& s, std::ostream& out) {
  write_u32(out, s.n);
  for (const auto& e : s.updates) {
    write_u32(out, e.u);
    write_u32(out, e.v);
    write_f64(out, e.w_old);
    write_f64(out, e.delta);
  }
}

inline UpdateStream parse_stream_binary(std::istream& in) {
  UpdateStream s;
  s.n = read_u32(in);
  while (true) {
    int c = in.peek();
    if (c == std::char_traits<char>::eof()) break;
    std::uint32_t u = read_u32(in);
    std::uint32_t v = read_u32(in);
    double w_old = read_f64(in);
    double delta = read_f64(in);
    if (u >= s.n || v >= s.n) throw data_error("node id out of range in binary stream");
    s.updates.push_back(make_update(u, v, w_old, delta));
  }
  return s;
}

}  // namespace mstclu
