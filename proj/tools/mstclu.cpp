// Command-line front-end: dataset generation -> sketching -> MST recovery ->
// clustering -> evaluation, plus a small benchmark and a scripted repro run.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mstclu/datagen.hpp"
#include "mstclu/dbmstclu.hpp"
#include "mstclu/graph_sketch.hpp"
#include "mstclu/graph_stream.hpp"
#include "mstclu/io.hpp"
#include "mstclu/metrics.hpp"
#include "mstclu/spanning_forest.hpp"

using namespace mstclu;
using nlohmann::json;

namespace {

int g_threads = 1;  // worker cap; all current kernels are single-threaded

void emit_error(const std::string& type, const std::string& message) {
  json err{{"error", type}, {"message", message}};
  std::cerr << err.dump() << "\n";
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot open output file: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open input file: " + path);
  return in;
}

// every artifact carries the tool version and the parameters that made it
json base_config(std::uint64_t seed) {
  return json{{"tool", "mstclu"}, {"version", kVersion}, {"seed", seed}, {"threads", g_threads}};
}

void write_meta(const std::string& artifact_path, const json& cfg) {
  auto out = open_out(artifact_path + ".meta.json");
  out << cfg.dump(2) << "\n";
}

void write_stream_with_config(const UpdateStream& s, const json& cfg, const std::string& path,
                              bool binary) {
  auto out = open_out(path);
  if (binary) {
    serialize_stream_binary(s, out);
    write_meta(path, cfg);
  } else {
    out << "# config " << cfg.dump() << "\n";
    serialize_stream(s, out);
  }
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------
struct GenOpts {
  std::string dataset;
  std::uint32_t n = 1000;
  std::uint32_t dims = 20;
  std::uint32_t k = 3;
  double noise = 0.05;
  double ambient_sigma = 0.02;
  std::uint64_t seed = 1;
  double p_in = 0.3, p_out = 0.01;
  double w_in_lo = 0.05, w_in_hi = 0.2, w_out_lo = 0.6, w_out_hi = 1.0;
  std::string metric = "euclidean";
  double w_min = 1e-3;
  bool binary = false;
  std::string out_points, out_stream, out_truth;
};

void run_gen(const GenOpts& o) {
  json cfg = base_config(o.seed);
  cfg["command"] = "gen";
  cfg["dataset"] = o.dataset;
  cfg["n"] = o.n;
  PointCloud pc;
  UpdateStream stream;
  std::vector<std::uint32_t> truth;
  if (o.dataset == "sbm") {
    SbmSpec spec;
    spec.n = o.n;
    spec.k = o.k;
    spec.p_in = o.p_in;
    spec.p_out = o.p_out;
    spec.w_in_lo = o.w_in_lo;
    spec.w_in_hi = o.w_in_hi;
    spec.w_out_lo = o.w_out_lo;
    spec.w_out_hi = o.w_out_hi;
    spec.seed = o.seed;
    cfg["k"] = o.k;
    cfg["p_in"] = o.p_in;
    cfg["p_out"] = o.p_out;
    stream = gen_sbm(spec, &truth);
  } else {
    cfg["dims"] = o.dims;
    cfg["noise"] = o.noise;
    cfg["ambient_sigma"] = o.ambient_sigma;
    if (o.dataset == "circles")
      pc = gen_circles(o.n, o.dims, o.noise, o.ambient_sigma, o.seed);
    else if (o.dataset == "moons")
      pc = gen_moons(o.n, o.dims, o.noise, o.ambient_sigma, o.seed);
    else if (o.dataset == "blobs") {
      pc = gen_blobs(o.n, o.k, o.dims, o.noise, o.ambient_sigma, o.seed);
      cfg["k"] = o.k;
    } else
      throw parameter_error("unknown dataset: " + o.dataset);
    truth = pc.labels;
    if (!o.out_stream.empty()) {
      Metric m = o.metric == "hamming" ? Metric::hamming : Metric::euclidean;
      if (o.metric != "hamming" && o.metric != "euclidean")
        throw parameter_error("unknown metric: " + o.metric);
      cfg["metric"] = o.metric;
      cfg["w_min"] = o.w_min;
      stream = build_dissimilarity_stream(pc.points, m, o.w_min);
    }
  }
  if (!o.out_points.empty()) {
    if (pc.points.empty()) throw parameter_error("dataset has no point representation");
    auto out = open_out(o.out_points);
    write_points_csv(pc, out);
    write_meta(o.out_points, cfg);
  }
  if (!o.out_stream.empty()) write_stream_with_config(stream, cfg, o.out_stream, o.binary);
  if (!o.out_truth.empty()) {
    auto out = open_out(o.out_truth);
    write_assignment_csv(truth, out);
    write_meta(o.out_truth, cfg);
  }
}

// ---------------------------------------------------------------------------
// mst
// ---------------------------------------------------------------------------
struct MstOpts {
  std::string in;
  bool binary = false;
  std::string mode = "sketch";
  std::string out;
  std::string out_json;
  double eps1 = 0.1;
  double w_min = 1e-3;
  std::uint64_t seed = 1;
  int reps = 0;    // 0 = default sizing
  int levels = 0;  // 0 = default sizing
};

void run_mst(const MstOpts& o) {
  if (o.mode != "sketch" && o.mode != "exact")
    throw parameter_error("mode must be 'sketch' or 'exact'");
  auto in = open_in(o.in);
  UpdateStream stream = o.binary ? parse_stream_binary(in) : parse_stream(in);
  json cfg = base_config(o.seed);
  cfg["command"] = "mst";
  cfg["mode"] = o.mode;
  ForestMeta meta;
  meta.seed = o.seed;
  meta.mode = o.mode;
  SpanningForest forest;
  if (o.mode == "exact") {
    forest = exact_mst(net_edges(stream), stream.n);
  } else {
    WeightGrid grid(o.eps1, o.w_min);
    cfg["eps1"] = o.eps1;
    cfg["w_min"] = o.w_min;
    cfg["reps"] = o.reps;
    cfg["levels_l"] = o.levels;
    meta.eps1 = o.eps1;
    meta.w_min = o.w_min;
    meta.levels = grid.levels;
    GraphSketch sk(stream.n, grid, o.seed, o.reps, o.levels);
    try {
      sk.apply_stream(stream);
      forest = sk.approx_mst();
      cfg["weight_estimate"] = sk.mst_weight_estimate();
    } catch (const incomplete_components_error& e) {
      // flag the partial result and surface the sampler failure as exit 4
      if (!o.out.empty()) {
        auto out = open_out(o.out + ".partial.csv");
        write_assignment_csv(e.partial, out);
        write_meta(o.out + ".partial.csv", cfg);
      }
      emit_error("sketch_failure", e.what());
      std::exit(4);
    }
  }
  if (!o.out.empty()) {
    auto out = open_out(o.out);
    out << "# config " << cfg.dump() << "\n";
    write_forest_text(forest, out);
  }
  if (!o.out_json.empty()) {
    json j = forest_to_json(forest, meta);
    j["config"] = cfg;
    auto out = open_out(o.out_json);
    out << j.dump(2) << "\n";
  }
}

// ---------------------------------------------------------------------------
// cluster
// ---------------------------------------------------------------------------
struct ClusterOpts {
  std::string forest;
  std::string out;
  std::string report;
  std::string baseline;  // empty or "semst"
  std::uint32_t k = 2;
  std::uint32_t noise_max_size = 0;  // 0 = off
};

void run_cluster(const ClusterOpts& o) {
  auto in = open_in(o.forest);
  SpanningForest f = read_forest_text(in);
  ClusterPartition p;
  json cfg = base_config(0);
  cfg["command"] = "cluster";
  if (o.baseline.empty()) {
    p = dbmstclu(f);
    cfg["algorithm"] = "dbmstclu";
  } else if (o.baseline == "semst") {
    p = semst(f, o.k);
    cfg["algorithm"] = "semst";
    cfg["k"] = o.k;
  } else {
    throw parameter_error("unknown baseline: " + o.baseline);
  }
  if (!o.out.empty()) {
    auto out = open_out(o.out);
    write_assignment_csv(p.assignment, out);
    write_meta(o.out, cfg);
  }
  json report = partition_to_json(p);
  report["config"] = cfg;
  if (o.noise_max_size > 0) {
    cfg["noise_max_size"] = o.noise_max_size;
    json noise = json::array();
    for (std::size_t l = 0; l < p.clusters.size(); ++l)
      if (p.clusters[l].size <= o.noise_max_size) noise.push_back(l);
    report["noise_clusters"] = noise;
    report["config"] = cfg;
  }
  if (o.report.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    auto out = open_out(o.report);
    out << report.dump(2) << "\n";
  }
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------
struct EvalOpts {
  std::string assignment;
  std::string truth;
  std::string points;
  std::string forest;
  std::string out;
};

void run_eval(const EvalOpts& o) {
  auto ain = open_in(o.assignment);
  std::vector<std::uint32_t> labels = read_assignment_csv(ain);
  json result = base_config(0);
  result["command"] = "eval";
  if (!o.truth.empty()) {
    auto tin = open_in(o.truth);
    std::vector<std::uint32_t> truth = read_assignment_csv(tin);
    result["ari"] = adjusted_rand_index(labels, truth);
  }
  if (!o.points.empty()) {
    auto pin = open_in(o.points);
    PointCloud pc = read_points_csv(pin);
    result["silhouette"] = silhouette_points(pc.points, labels);
  }
  if (!o.forest.empty()) {
    auto fin = open_in(o.forest);
    SpanningForest f = read_forest_text(fin);
    result["dbcvi"] = dbcvi_score(f, labels);
  }
  if (o.out.empty()) {
    std::cout << result.dump(2) << "\n";
  } else {
    auto out = open_out(o.out);
    out << result.dump(2) << "\n";
  }
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------
struct BenchOpts {
  std::vector<std::uint64_t> sizes{1000, 10000};
  std::vector<std::uint32_t> ks{5, 20};
  double intra_deg = 10.0;  // average intra-block degree
  double inter_deg = 1.0;   // average degree toward other blocks
  std::uint64_t seed = 1;
  std::string out;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void run_bench(const BenchOpts& o) {
  std::ostringstream csv;
  csv << "n,k,edges,gen_seconds,mst_seconds,cluster_seconds,total_seconds\n";
  for (std::uint64_t n : o.sizes) {
    for (std::uint32_t k : o.ks) {
      if (n % k != 0) throw parameter_error("bench: every k must divide every n");
      std::uint64_t bs = n / k;
      SbmSpec spec;
      spec.n = static_cast<std::uint32_t>(n);
      spec.k = k;
      spec.p_in = bs > 1 ? std::min(1.0, o.intra_deg / static_cast<double>(bs - 1)) : 0.0;
      spec.p_out = std::min(1.0, o.inter_deg / static_cast<double>(n - bs));
      spec.seed = o.seed;
      auto t0 = std::chrono::steady_clock::now();
      UpdateStream stream = gen_sbm(spec);
      double gen_s = seconds_since(t0);
      t0 = std::chrono::steady_clock::now();
      SpanningForest forest = exact_mst(net_edges(stream), spec.n);
      double mst_s = seconds_since(t0);
      t0 = std::chrono::steady_clock::now();
      ClusterPartition p = dbmstclu(forest);
      double cluster_s = seconds_since(t0);
      (void)p;
      csv << n << "," << k << "," << stream.updates.size() << "," << gen_s << "," << mst_s << ","
          << cluster_s << "," << (gen_s + mst_s + cluster_s) << "\n";
    }
  }
  if (o.out.empty()) {
    std::cout << csv.str();
  } else {
    auto out = open_out(o.out);
    out << csv.str();
    json cfg = base_config(o.seed);
    cfg["command"] = "bench";
    write_meta(o.out, cfg);
  }
}

// ---------------------------------------------------------------------------
// repro: the scripted end-to-end pipeline on the synthetic point datasets
// ---------------------------------------------------------------------------
struct ReproOpts {
  std::string out_dir = "repro_out";
  std::uint32_t n = 1000;
  std::uint32_t dims = 20;
  std::uint64_t seed = 1;
};

void run_repro(const ReproOpts& o) {
  namespace fs = std::filesystem;
  fs::create_directories(o.out_dir);
  std::ostringstream summary;
  summary << "dataset,n,num_clusters,ari,silhouette,dbcvi,semst_k2_ari\n";
  for (const std::string& name : {"circles", "moons"}) {
    PointCloud pc = name == "circles" ? gen_circles(o.n, o.dims, 0.05, 0.02, o.seed)
                                      : gen_moons(o.n, o.dims, 0.05, 0.02, o.seed);
    UpdateStream stream = build_dissimilarity_stream(pc.points);
    SpanningForest forest = exact_mst(net_edges(stream), stream.n);
    ClusterPartition p = dbmstclu(forest);
    ClusterPartition base = semst(forest, 2);
    double ari = adjusted_rand_index(p.assignment, pc.labels);
    double sil = silhouette_points(pc.points, p.assignment);
    double base_ari = adjusted_rand_index(base.assignment, pc.labels);
    summary << name << "," << o.n << "," << p.num_clusters() << "," << ari << "," << sil << ","
            << p.dbcvi << "," << base_ari << "\n";
    json cfg = base_config(o.seed);
    cfg["command"] = "repro";
    cfg["dataset"] = name;
    std::string fpath = o.out_dir + "/" + name + "_forest.txt";
    auto fout = open_out(fpath);
    fout << "# config " << cfg.dump() << "\n";
    write_forest_text(forest, fout);
    std::string apath = o.out_dir + "/" + name + "_assignment.csv";
    auto aout = open_out(apath);
    write_assignment_csv(p.assignment, aout);
    write_meta(apath, cfg);
    json report = partition_to_json(p);
    report["config"] = cfg;
    report["ari"] = ari;
    report["silhouette"] = sil;
    auto rout = open_out(o.out_dir + "/" + name + "_report.json");
    rout << report.dump(2) << "\n";
  }
  auto sout = open_out(o.out_dir + "/summary.csv");
  sout << summary.str();
  std::cout << summary.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"streaming graph sketching, approximate MST recovery and density-based clustering"};
  app.set_version_flag("--version", std::string(kVersion));
  app.add_option("--threads", g_threads, "cap on worker threads")->check(CLI::PositiveNumber);
  app.require_subcommand(1);

  GenOpts gen;
  auto* cgen = app.add_subcommand("gen", "generate a synthetic dataset");
  cgen->add_option("dataset", gen.dataset, "circles|moons|blobs|sbm")->required();
  cgen->add_option("--n", gen.n, "number of points/nodes")->required();
  cgen->add_option("--dims", gen.dims, "embedding dimensions");
  cgen->add_option("--k", gen.k, "blobs/sbm cluster count");
  cgen->add_option("--noise", gen.noise, "signal-dimension noise sigma");
  cgen->add_option("--ambient-sigma", gen.ambient_sigma, "ambient-dimension noise sigma");
  cgen->add_option("--seed", gen.seed, "master seed");
  cgen->add_option("--p-in", gen.p_in, "sbm intra-block edge probability");
  cgen->add_option("--p-out", gen.p_out, "sbm inter-block edge probability");
  cgen->add_option("--w-in-lo", gen.w_in_lo);
  cgen->add_option("--w-in-hi", gen.w_in_hi);
  cgen->add_option("--w-out-lo", gen.w_out_lo);
  cgen->add_option("--w-out-hi", gen.w_out_hi);
  cgen->add_option("--metric", gen.metric, "euclidean|hamming dissimilarity");
  cgen->add_option("--w-min", gen.w_min, "smallest representable weight");
  cgen->add_flag("--binary", gen.binary, "binary stream format");
  cgen->add_option("--out-points", gen.out_points, "points CSV path");
  cgen->add_option("--out-stream", gen.out_stream, "edge-update stream path");
  cgen->add_option("--out-truth", gen.out_truth, "ground-truth labels CSV path");

  MstOpts mst;
  auto* cmst = app.add_subcommand("mst", "recover a spanning forest from an update stream");
  cmst->add_option("--in", mst.in, "input stream path")->required();
  cmst->add_flag("--binary", mst.binary, "input stream is binary");
  cmst->add_option("--mode", mst.mode, "sketch|exact");
  cmst->add_option("--out", mst.out, "forest text output path");
  cmst->add_option("--json", mst.out_json, "forest JSON output path");
  cmst->add_option("--eps1", mst.eps1, "weight grid resolution");
  cmst->add_option("--w-min", mst.w_min, "smallest representable weight");
  cmst->add_option("--seed", mst.seed, "sketch master seed");
  cmst->add_option("--reps", mst.reps, "sampler repetitions (0 = auto)");
  cmst->add_option("--levels", mst.levels, "sampler cell levels (0 = auto)");

  ClusterOpts clu;
  auto* cclu = app.add_subcommand("cluster", "cluster a spanning forest");
  cclu->add_option("--forest", clu.forest, "forest text input path")->required();
  cclu->add_option("--out", clu.out, "assignment CSV output path");
  cclu->add_option("--report", clu.report, "report JSON output path (default stdout)");
  cclu->add_option("--baseline", clu.baseline, "semst: cut the k-1 heaviest edges");
  cclu->add_option("--k", clu.k, "baseline cluster count");
  cclu->add_option("--noise-max-size", clu.noise_max_size,
                   "flag clusters of at most this size as noise (0 = off)");

  EvalOpts ev;
  auto* cev = app.add_subcommand("eval", "score an assignment");
  cev->add_option("--assignment", ev.assignment, "assignment CSV")->required();
  cev->add_option("--truth", ev.truth, "ground-truth CSV (enables ARI)");
  cev->add_option("--points", ev.points, "points CSV (enables silhouette)");
  cev->add_option("--forest", ev.forest, "forest text (enables the density validity index)");
  cev->add_option("--out", ev.out, "metrics JSON output path (default stdout)");

  BenchOpts bench;
  auto* cbench = app.add_subcommand("bench", "time the pipeline over an n x k grid");
  cbench->add_option("--sizes", bench.sizes, "node counts");
  cbench->add_option("--ks", bench.ks, "block counts");
  cbench->add_option("--intra-deg", bench.intra_deg, "average intra-block degree");
  cbench->add_option("--inter-deg", bench.inter_deg, "average inter-block degree");
  cbench->add_option("--seed", bench.seed, "master seed");
  cbench->add_option("--out", bench.out, "timing CSV output path (default stdout)");

  ReproOpts rep;
  auto* crep = app.add_subcommand("repro", "scripted circles/moons pipeline");
  crep->add_option("--out-dir", rep.out_dir, "artifact directory");
  crep->add_option("--n", rep.n, "points per dataset");
  crep->add_option("--dims", rep.dims, "embedding dimensions");
  crep->add_option("--seed", rep.seed, "master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    std::stringstream dump;
    int code = app.exit(e, dump, dump);
    (void)code;
    emit_error("parameter_error", e.what());
    return 2;
  }

  try {
    if (cgen->parsed()) run_gen(gen);
    if (cmst->parsed()) run_mst(mst);
    if (cclu->parsed()) run_cluster(clu);
    if (cev->parsed()) run_eval(ev);
    if (cbench->parsed()) run_bench(bench);
    if (crep->parsed()) run_repro(rep);
  } catch (const parameter_error& e) {
    emit_error("parameter_error", e.what());
    return 2;
  } catch (const incomplete_components_error& e) {
    emit_error("sketch_failure", e.what());
    return 4;
  } catch (const data_error& e) {
    emit_error("data_error", e.what());
    return 3;
  } catch (const std::exception& e) {
    emit_error("error", e.what());
    return 1;
  }
  return 0;
}
