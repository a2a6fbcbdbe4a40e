#include <doctest.h>

#include <sstream>

#include "mstclu/datagen.hpp"
#include "mstclu/dbmstclu.hpp"
#include "mstclu/graph_sketch.hpp"
#include "mstclu/io.hpp"
#include "mstclu/metrics.hpp"

using namespace mstclu;

TEST_CASE("end-to-end smoke: tiny pipeline compiles and runs") {
  UpdateStream s;
  s.n = 4;
  s.updates.push_back(make_update(0, 1, 0.0, 0.1));
  s.updates.push_back(make_update(1, 2, 0.0, 0.9));
  s.updates.push_back(make_update(2, 3, 0.0, 0.1));
  std::vector<WeightedEdge> edges = net_edges(s);
  SpanningForest f = exact_mst(edges, s.n);
  CHECK(f.edges.size() == 3);
  ClusterPartition p = dbmstclu(f);
  // heavy middle edge first, then the two pair clusters shed a singleton each
  // until one more cut would leave only singletons
  CHECK(p.num_clusters() == 3);
  CHECK(p.trace[0].w == 0.9);
  CHECK(dbcvi_score(f, p.assignment) == p.dbcvi);
}
