#include <doctest.h>

#include <cmath>
#include <sstream>

#include "mstclu/graph_stream.hpp"
#include "mstclu/rng.hpp"

using namespace mstclu;

TEST_CASE("edge id round-trips for all pairs at small n") {
  for (std::uint32_t n : {2u, 3u, 5u, 17u, 100u}) {
    EdgeId expect = 0;
    for (std::uint32_t u = 0; u < n; ++u) {
      for (std::uint32_t v = u + 1; v < n; ++v) {
        EdgeId id = canonical_edge_id(u, v, n);
        CHECK(id == expect);  // lexicographic rank
        CHECK(canonical_edge_id(v, u, n) == id);
        auto [a, b] = edge_endpoints(id, n);
        CHECK(a == u);
        CHECK(b == v);
        ++expect;
      }
    }
    CHECK(expect == num_edges(n));
  }
}

TEST_CASE("edge id round-trips on random pairs at large n") {
  Rng rng(7);
  std::uint64_t n = 200000;
  for (int i = 0; i < 2000; ++i) {
    std::uint32_t u = static_cast<std::uint32_t>(rng.uniform_int(n));
    std::uint32_t v = static_cast<std::uint32_t>(rng.uniform_int(n));
    if (u == v) continue;
    EdgeId id = canonical_edge_id(u, v, n);
    auto [a, b] = edge_endpoints(id, n);
    CHECK(a == std::min(u, v));
    CHECK(b == std::max(u, v));
  }
}

TEST_CASE("edge id rejects self-loops and out-of-range nodes") {
  CHECK_THROWS_AS(canonical_edge_id(3, 3, 10), degenerate_edge_error);
  CHECK_THROWS_AS(canonical_edge_id(0, 10, 10), range_error);
  CHECK_THROWS_AS(edge_endpoints(num_edges(10), 10), range_error);
}

TEST_CASE("weight grid quantization endpoints") {
  WeightGrid g(0.1, 1e-3);
  CHECK(g.quantize(g.w_min) == 0);
  CHECK(g.quantize(1.0) == g.levels);
  CHECK(g.grid_value(g.levels) == 1.0);
  CHECK(g.raw(g.levels - 1) < 1.0);
  CHECK(g.raw(g.levels) >= 1.0);
  // sub-minimum weights clamp to level 0
  CHECK(g.quantize(1e-6) == 0);
}

TEST_CASE("quantize worked example: w_min=0.01, step 0.1, w=0.05") {
  WeightGrid g(0.1, 0.01);
  CHECK(g.quantize(0.05) == 17);  // smallest k with 0.01*1.1^k >= 0.05
  CHECK(g.grid_value(17) >= 0.05);
  CHECK(g.grid_value(16) < 0.05);
}

TEST_CASE("quantize is monotone and tight") {
  WeightGrid g(0.1, 1e-3);
  Rng rng(42);
  int prev_k = 0;
  double prev_w = 0;
  for (int i = 0; i < 5000; ++i) {
    double w = rng.uniform(1e-4, 1.0);
    int k = g.quantize(w);
    CHECK(g.grid_value(k) >= w);
    if (w >= g.w_min) CHECK(g.grid_value(k) <= w * (1 + g.eps1) * (1 + 1e-12));
    if (w >= prev_w) CHECK(k >= prev_k);
    // monotonicity checked pairwise on a sorted walk instead:
    prev_w = w;
    prev_k = k;
  }
  // explicit sorted sweep
  prev_k = 0;
  for (double w = 1e-4; w <= 1.0; w += 1e-4) {
    int k = g.quantize(std::min(w, 1.0));
    CHECK(k >= prev_k);
    prev_k = k;
  }
}

TEST_CASE("quantize rejects weights outside (0,1]") {
  WeightGrid g(0.1, 1e-3);
  CHECK_THROWS_AS(g.quantize(0.0), weight_range_error);
  CHECK_THROWS_AS(g.quantize(-0.5), weight_range_error);
  CHECK_THROWS_AS(g.quantize(1.5), weight_range_error);
}

TEST_CASE("grid rejects bad parameters") {
  CHECK_THROWS_AS(WeightGrid(0.0, 0.5), parameter_error);
  CHECK_THROWS_AS(WeightGrid(0.1, 0.0), parameter_error);
  CHECK_THROWS_AS(WeightGrid(0.1, 1.5), parameter_error);
}

TEST_CASE("make_update canonicalizes and validates") {
  EdgeUpdate e = make_update(5, 2, 0.0, 0.5);
  CHECK(e.u == 2);
  CHECK(e.v == 5);
  CHECK(e.w_new() == 0.5);
  CHECK_THROWS_AS(make_update(1, 1, 0.0, 0.5), degenerate_edge_error);
  CHECK_THROWS_AS(make_update(0, 1, 0.5, -0.6), weight_range_error);
  CHECK_THROWS_AS(make_update(0, 1, 0.8, 0.3), weight_range_error);
  CHECK_THROWS_AS(make_update(0, 1, 1.5, -1.0), weight_range_error);
}

TEST_CASE("stream parsing: inserts, updates, deletes") {
  std::istringstream in(
      "# comment\n"
      "N 8\n"
      "0 1 0.0 0.5\n"
      "\n"
      "0 1 0.5 -0.5  # delete\n"
      "3 7 0.2 0.1\n");
  UpdateStream s = parse_stream(in);
  CHECK(s.n == 8);
  REQUIRE(s.updates.size() == 3);
  CHECK(s.updates[0].w_new() == 0.5);
  CHECK(s.updates[1].w_new() == 0.0);
  CHECK(s.updates[2].u == 3);
  CHECK(s.updates[2].v == 7);
  CHECK(s.updates[2].w_new() == doctest::Approx(0.3));
}

TEST_CASE("stream parsing reports line numbers on errors") {
  {
    std::istringstream in("N 4\n0 1 0.0\n");
    try {
      parse_stream(in);
      FAIL("expected parse_error");
    } catch (const parse_error& e) {
      CHECK(e.line_number == 2);
    }
  }
  {
    std::istringstream in("N 4\n0 1 0.0 0.5 junk\n");
    CHECK_THROWS_AS(parse_stream(in), parse_error);
  }
  {
    std::istringstream in("N 4\n0 9 0.0 0.5\n");
    CHECK_THROWS_AS(parse_stream(in), parse_error);
  }
  {
    std::istringstream in("0 1 0.0 0.5\n");
    CHECK_THROWS_AS(parse_stream(in), data_error);
  }
  {
    std::istringstream in("N 4\n0 1 0.0 1.5\n");
    CHECK_THROWS_AS(parse_stream(in), parse_error);
  }
}

static UpdateStream random_stream(std::uint64_t seed, std::uint32_t n, int count) {
  Rng rng(seed);
  UpdateStream s;
  s.n = n;
  for (int i = 0; i < count; ++i) {
    std::uint32_t u = static_cast<std::uint32_t>(rng.uniform_int(n));
    std::uint32_t v = static_cast<std::uint32_t>(rng.uniform_int(n));
    if (u == v) continue;
    double w_old = rng.uniform(0.0, 0.5);
    double delta = rng.uniform(-w_old, 1.0 - w_old);
    s.updates.push_back(make_update(u, v, w_old, delta));
  }
  return s;
}

TEST_CASE("parse after serialize is the identity (text)") {
  UpdateStream s = random_stream(99, 50, 500);
  std::ostringstream out;
  serialize_stream(s, out);
  std::istringstream in(out.str());
  UpdateStream back = parse_stream(in);
  REQUIRE(back.n == s.n);
  REQUIRE(back.updates.size() == s.updates.size());
  for (std::size_t i = 0; i < s.updates.size(); ++i) {
    CHECK(back.updates[i].u == s.updates[i].u);
    CHECK(back.updates[i].v == s.updates[i].v);
    CHECK(back.updates[i].w_old == s.updates[i].w_old);  // %.17g is lossless
    CHECK(back.updates[i].delta == s.updates[i].delta);
  }
}

TEST_CASE("parse after serialize is the identity (binary)") {
  UpdateStream s = random_stream(123, 50, 500);
  std::ostringstream out;
  serialize_stream_binary(s, out);
  std::istringstream in(out.str());
  UpdateStream back = parse_stream_binary(in);
  REQUIRE(back.n == s.n);
  REQUIRE(back.updates.size() == s.updates.size());
  for (std::size_t i = 0; i < s.updates.size(); ++i) {
    CHECK(back.updates[i].u == s.updates[i].u);
    CHECK(back.updates[i].w_old == s.updates[i].w_old);
    CHECK(back.updates[i].delta == s.updates[i].delta);
  }
  // serialization is byte-stable
  std::ostringstream out2;
  serialize_stream_binary(back, out2);
  CHECK(out.str() == out2.str());
}
