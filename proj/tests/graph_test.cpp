#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "giso/errors.hpp"
#include "giso/graph.hpp"

namespace giso {
namespace {

Permutation shuffled(int n, std::mt19937_64& rng) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  std::shuffle(v.begin(), v.end(), rng);
  return Permutation(v);
}

Graph make(int n, std::vector<std::pair<int, int>> e) {
  Graph g;
  g.n = n;
  g.edges = std::move(e);
  return g;
}

Graph cycle(int n) {
  Graph g;
  g.n = n;
  for (int i = 0; i < n; ++i) g.edges.push_back({i, (i + 1) % n});
  return g;
}

Graph cube() {
  Graph g;
  g.n = 8;
  for (int v = 0; v < 8; ++v)
    for (int b = 1; b < 8; b <<= 1)
      if (v < (v ^ b)) g.edges.push_back({v, v ^ b});
  return g;
}

// Cubic, 8 vertices, not bipartite.
Graph twisted_cube() { return make(8, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 0}, {0, 4}, {1, 5}, {2, 6}, {3, 7}}); }

bool maps_onto(const Graph& a, const Graph& b, const Permutation& p) {
  for (auto [u, v] : a.edges)
    if (!b.has_edge(p[u], p[v])) return false;
  return a.edges.size() == b.edges.size();
}

bool is_cubic_connected(const Graph& g) {
  auto d = g.degrees();
  return g.connected() && std::all_of(d.begin(), d.end(), [](int x) { return x == 3; });
}

Graph random_cubic(int n, std::mt19937_64& rng) {
  // Pairing model with rejection.
  for (;;) {
    std::vector<int> pts;
    for (int v = 0; v < n; ++v)
      for (int i = 0; i < 3; ++i) pts.push_back(v);
    std::shuffle(pts.begin(), pts.end(), rng);
    Graph g;
    g.n = n;
    bool ok = true;
    for (std::size_t i = 0; i < pts.size() && ok; i += 2) {
      int u = pts[i], v = pts[i + 1];
      if (u == v || g.has_edge(u, v)) ok = false;
      else g.edges.push_back({std::min(u, v), std::max(u, v)});
    }
    if (ok && g.connected()) return g;
  }
}

TEST(Graph, EnumerationCounts) {
  const int total[] = {1, 2, 4, 11, 34, 156, 1044};
  const int conn[] = {1, 1, 2, 6, 21, 112, 853};
  for (int n = 1; n <= 7; ++n) {
    EXPECT_EQ(all_graphs(n, false).size(), static_cast<std::size_t>(total[n - 1])) << n;
    EXPECT_EQ(all_graphs(n, true).size(), static_cast<std::size_t>(conn[n - 1])) << n;
  }
}

TEST(Graph, ReadWriteRoundTrip) {
  Graph g = random_graph(9, 0.4, 7);
  std::stringstream ss;
  write_graph(ss, g);
  Graph h = read_graph(ss);
  EXPECT_EQ(h.n, g.n);
  EXPECT_EQ(h.edges, g.edges);
  std::istringstream bad("3 1\n0 5\n");
  EXPECT_THROW(read_graph(bad), InputError);
}

TEST(Graph, StringEncoding) {
  Graph t = make(3, {{0, 1}, {1, 2}, {0, 2}});
  auto s = graph_to_string(t, t);
  ASSERT_EQ(s.x.size(), 3u);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(s.x[i], 1);
  std::mt19937_64 rng(3);
  Graph g = random_graph(6, 0.5, 1);
  auto gs = graph_to_string(g, g);
  for (int t2 = 0; t2 < 20; ++t2) {
    Permutation a = shuffled(6, rng), b = shuffled(6, rng);
    EXPECT_EQ(pair_action(gs, a * b), pair_action(gs, a) * pair_action(gs, b));
    EXPECT_EQ(vertex_lift(gs, pair_action(gs, a)), a);
  }
}

TEST(Graph, SmallAutomorphismGroups) {
  auto c5 = graph_iso(cycle(5), cycle(5));
  EXPECT_TRUE(c5.isomorphic);
  EXPECT_EQ(c5.aut_order, BigInt(10));
  EXPECT_EQ(brute_force_iso(cycle(5), cycle(5)).size(), 10u);
  // The smallest asymmetric tree has 7 vertices.
  Graph tree = make(7, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {2, 6}});
  auto r = graph_iso(tree, tree);
  EXPECT_EQ(brute_force_iso(tree, tree).size(), 1u);
  EXPECT_EQ(r.aut_order, BigInt(1));
}

TEST(BoundedDegree, GadgetShape) {
  Graph c = cube();
  Graph gad = edge_gadget(c, c.edges[0], c, c.edges[3]);
  EXPECT_EQ(gad.n, 18);
  EXPECT_EQ(gad.edges.size(), 2 * c.edges.size() + 3);
  EXPECT_TRUE(is_cubic_connected(gad));
}

TEST(BoundedDegree, GadgetGroupMatchesBruteForce) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 6; ++trial) {
    int n = trial < 3 ? 4 : 6;
    Graph a = random_cubic(n, rng), b = random_cubic(n, rng);
    Graph gad = edge_gadget(a, a.edges[0], b, b.edges[trial % b.edges.size()]);
    int p = 2 * n, q = 2 * n + 1;
    GenSet gens = aut_fixing_edge(gad, p, q, 3);
    for (const auto& s : gens.gens) EXPECT_TRUE(maps_onto(gad, gad, s));
    auto all = brute_force_iso(gad, gad, 14);
    std::size_t fixing = 0, edge_stab = 0;
    for (const auto& s : all) {
      if (s[p] == p && s[q] == q) ++fixing;
      if ((s[p] == p && s[q] == q) || (s[p] == q && s[q] == p)) ++edge_stab;
    }
    PermGroup grp(gens);
    EXPECT_EQ(grp.order(), BigInt(edge_stab)) << trial;
    for (const auto& s : all)
      if ((s[p] == p && s[q] == q) || (s[p] == q && s[q] == p)) EXPECT_TRUE(grp.contains(s));
    EXPECT_GT(fixing, 0u);
  }
}

TEST(BoundedDegree, CubeAgainstRelabeledCube) {
  std::mt19937_64 rng(5);
  Graph c = cube();
  Graph d = c.relabeled(shuffled(8, rng));
  auto r = bounded_degree_pipeline(c, d, 3);
  ASSERT_FALSE(r.iso.empty);
  EXPECT_TRUE(maps_onto(c, d, r.iso.rep));
  EXPECT_EQ(r.iso.size(), BigInt(48));
  EXPECT_EQ(r.gadgets.size(), d.edges.size());
  // Every edge of the cube is equivalent: each gadget has a swapping element.
  for (const auto& g : r.gadgets) EXPECT_GT(g.transposing, 0u);
}

TEST(BoundedDegree, CubeAgainstTwistedCube) {
  Graph c = cube(), t = twisted_cube();
  ASSERT_TRUE(is_cubic_connected(t));
  EXPECT_EQ(c.degrees(), t.degrees());
  EXPECT_FALSE(brute_force_isomorphic(c, t));
  auto r = bounded_degree_pipeline(c, t, 3);
  EXPECT_TRUE(r.iso.empty);
  for (const auto& g : r.gadgets) EXPECT_EQ(g.transposing, 0u);
}

TEST(BoundedDegree, RandomCubicPairsAgainstOracle) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 4 + 2 * (trial % 4);  // 4..10
    Graph a = random_cubic(n, rng);
    Graph b = trial % 2 ? a.relabeled(shuffled(n, rng)) : random_cubic(n, rng);
    auto all = brute_force_iso(a, b, 10);
    auto r = bounded_degree_pipeline(a, b, 3);
    EXPECT_EQ(r.iso.empty, all.empty()) << trial;
    if (!all.empty()) {
      EXPECT_EQ(r.iso.size(), BigInt(all.size())) << trial;
      EXPECT_TRUE(maps_onto(a, b, r.iso.rep));
      for (const auto& s : all) EXPECT_TRUE(r.iso.contains(s));
    }
  }
}

TEST(BoundedDegree, CyclesAndPaths) {
  std::mt19937_64 rng(2);
  Graph c = cycle(9);
  auto r = bounded_degree_pipeline(c, c.relabeled(shuffled(9, rng)), 3);
  EXPECT_EQ(r.iso.size(), BigInt(18));
  Graph path = make(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
  EXPECT_EQ(bounded_degree_pipeline(path, path, 3).iso.size(), BigInt(2));
  EXPECT_TRUE(bounded_degree_pipeline(cycle(6), path, 3).iso.empty);
}

}  // namespace
}  // namespace giso
