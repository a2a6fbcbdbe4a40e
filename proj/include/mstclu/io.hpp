#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mstclu/common.hpp"
#include "mstclu/datagen.hpp"
#include "mstclu/dbmstclu.hpp"
#include "mstclu/graph_sketch.hpp"
#include "mstclu/graph_stream.hpp"
#include "mstclu/l0_sketch.hpp"
#include "mstclu/spanning_forest.hpp"

namespace mstclu {

using nlohmann::json;

inline std::string format_weight(double w) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", w);
  return buf;
}

// ---- spanning forest, text: "N <count>" header then "u v w" lines sorted
// by (weight, edge id) ----

inline void write_forest_text(const SpanningForest& f, std::ostream& out) {
  SpanningForest sorted = f;
  sorted.sort_edges();
  out << "N " << sorted.n << "\n";
  for (const auto& e : sorted.edges)
    out << e.u << " " << e.v << " " << format_weight(e.w) << "\n";
}

inline SpanningForest read_forest_text(std::istream& in) {
  SpanningForest f;
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
      if (!(ls >> tag)) continue;
      std::uint64_t n;
      if (tag != "N" || !(ls >> n)) throw parse_error("expected header 'N <count>'", lineno);
      f.n = static_cast<std::uint32_t>(n);
      have_header = true;
      continue;
    }
    std::uint64_t u, v;
    double w;
    if (!(ls >> u)) continue;
    if (!(ls >> v >> w)) throw parse_error("malformed forest line", lineno);
    std::string extra;
    if (ls >> extra) throw parse_error("trailing tokens on forest line", lineno);
    if (u >= f.n || v >= f.n) throw parse_error("node id out of range", lineno);
    if (!(w > 0.0) || w > 1.0) throw parse_error("forest weight outside (0,1]", lineno);
    f.edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), w});
  }
  if (!have_header) throw data_error("forest file has no 'N <count>' header");
  return f;
}

struct ForestMeta {
  std::uint64_t seed = 0;
  double eps1 = 0.0;
  double w_min = 0.0;
  int levels = 0;
  std::string mode;  // "exact" or "sketch"
};

inline json forest_to_json(const SpanningForest& f, const ForestMeta& meta) {
  SpanningForest sorted = f;
  sorted.sort_edges();
  json edges = json::array();
  for (const auto& e : sorted.edges) edges.push_back({e.u, e.v, e.w});
  return json{{"version", kVersion},
              {"n", sorted.n},
              {"edges", edges},
              {"meta",
               {{"seed", meta.seed},
                {"eps1", meta.eps1},
                {"w_min", meta.w_min},
                {"levels", meta.levels},
                {"mode", meta.mode}}}};
}

inline SpanningForest forest_from_json(const json& j) {
  SpanningForest f;
  f.n = j.at("n").get<std::uint32_t>();
  for (const auto& e : j.at("edges")) {
    NodeId u = e.at(0).get<NodeId>();
    NodeId v = e.at(1).get<NodeId>();
    double w = e.at(2).get<double>();
    if (u >= f.n || v >= f.n) throw data_error("node id out of range in forest json");
    if (!(w > 0.0) || w > 1.0) throw data_error("forest weight outside (0,1]");
    f.edges.push_back({u, v, w});
  }
  return f;
}

// ---- cluster assignments, CSV "node,cluster" ----

inline void write_assignment_csv(const std::vector<std::uint32_t>& assignment, std::ostream& out) {
  out << "node,cluster\n";
  for (std::size_t i = 0; i < assignment.size(); ++i) out << i << "," << assignment[i] << "\n";
}

inline std::vector<std::uint32_t> read_assignment_csv(std::istream& in) {
  std::vector<std::uint32_t> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (lineno == 1 && line.rfind("node,", 0) == 0) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw parse_error("expected 'node,cluster'", lineno);
    std::size_t node = std::stoull(line.substr(0, comma));
    std::uint32_t cluster = static_cast<std::uint32_t>(std::stoul(line.substr(comma + 1)));
    if (node != out.size()) throw parse_error("nodes must be consecutive from 0", lineno);
    out.push_back(cluster);
  }
  return out;
}

// ---- run report ----

inline json partition_to_json(const ClusterPartition& p) {
  json trace = json::array();
  for (const auto& t : p.trace)
    trace.push_back({{"u", t.u},
                     {"v", t.v},
                     {"w", t.w},
                     {"dbcvi_before", t.dbcvi_before},
                     {"dbcvi_after", t.dbcvi_after}});
  json clusters = json::array();
  for (const auto& c : p.clusters)
    clusters.push_back(
        {{"size", c.size}, {"sep", c.sep}, {"disp", c.disp}, {"validity", c.validity}});
  json cuts = json::array();
  for (const auto& [u, v] : p.cuts) cuts.push_back({u, v});
  return json{{"version", kVersion}, {"n", p.n},       {"dbcvi", p.dbcvi},
              {"num_clusters", p.clusters.size()},     {"clusters", clusters},
              {"cuts", cuts},       {"trace", trace}};
}

// ---- point clouds, CSV with trailing label column ----

inline void write_points_csv(const PointCloud& pc, std::ostream& out) {
  std::size_t dims = pc.points.empty() ? 0 : pc.points[0].size();
  for (std::size_t k = 0; k < dims; ++k) out << "x" << k << ",";
  out << "label\n";
  for (std::size_t i = 0; i < pc.points.size(); ++i) {
    for (double x : pc.points[i]) out << format_weight(x) << ",";
    out << pc.labels[i] << "\n";
  }
}

inline PointCloud read_points_csv(std::istream& in) {
  PointCloud pc;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (lineno == 1 && line.rfind("x0,", 0) == 0) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) row.push_back(std::stod(tok));
    if (row.empty()) throw parse_error("empty point row", lineno);
    pc.labels.push_back(static_cast<std::uint32_t>(row.back()));
    row.pop_back();
    pc.points.push_back(std::move(row));
  }
  return pc;
}

// ---- sketch snapshot: versioned fixed-width little-endian binary ----

inline constexpr std::uint64_t kSketchMagic = 0x4b53554c4354534dULL;  // "MSTCLUSK" LE
inline constexpr std::uint32_t kSketchFormatVersion = 1;

inline void write_sketch_snapshot(const GraphSketch& sk, std::ostream& out) {
  const SketchConfig& cfg = sk.config();
  write_u64(out, kSketchMagic);
  write_u32(out, kSketchFormatVersion);
  write_u32(out, cfg.n);
  write_f64(out, cfg.grid.eps1);
  write_f64(out, cfg.grid.w_min);
  write_u32(out, static_cast<std::uint32_t>(cfg.grid.levels));
  write_u32(out, static_cast<std::uint32_t>(cfg.reps));
  write_u32(out, static_cast<std::uint32_t>(cfg.levels_l));
  write_u64(out, cfg.master_seed);
  write_u64(out, sk.updates_seen());
  for (const auto& node : sk.nodes())
    for (const auto& sampler : node.samplers())
      for (const auto& cell : sampler.cells()) {
        write_i64(out, cell.phi);
        write_i64(out, cell.iota);
        write_u64(out, cell.tau);
      }
}

inline GraphSketch read_sketch_snapshot(std::istream& in) {
  if (read_u64(in) != kSketchMagic) throw data_error("not a sketch snapshot");
  if (read_u32(in) != kSketchFormatVersion) throw data_error("unsupported snapshot version");
  std::uint32_t n = read_u32(in);
  double eps1 = read_f64(in);
  double w_min = read_f64(in);
  std::uint32_t levels = read_u32(in);
  std::uint32_t reps = read_u32(in);
  std::uint32_t levels_l = read_u32(in);
  std::uint64_t seed = read_u64(in);
  std::uint64_t updates_seen = read_u64(in);
  WeightGrid grid(eps1, w_min);
  if (static_cast<std::uint32_t>(grid.levels) != levels)
    throw data_error("snapshot grid level count mismatch");
  GraphSketch sk(n, grid, seed, static_cast<int>(reps), static_cast<int>(levels_l));
  sk.set_updates_seen(updates_seen);
  for (auto& node : sk.nodes())
    for (auto& sampler : node.samplers())
      for (auto& cell : sampler.cells()) {
        cell.phi = read_i64(in);
        cell.iota = read_i64(in);
        cell.tau = read_u64(in);
      }
  return sk;
}

}  // namespace mstclu
