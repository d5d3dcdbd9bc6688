#include <gtest/gtest.h>

#include <random>
#include <set>

#include "giso/errors.hpp"
#include "giso/graph.hpp"
#include "giso/string_iso.hpp"
#include "oracles.hpp"

using namespace giso;

namespace {

Graph cycles(std::vector<int> lens) {
  Graph g;
  for (int len : lens) {
    for (int i = 0; i < len; ++i) g.edges.emplace_back(g.n + i, g.n + (i + 1) % len);
    g.n += len;
  }
  return g;
}

Graph complete_bipartite(int a, int b) {
  Graph g;
  g.n = a + b;
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) g.edges.emplace_back(i, a + j);
  return g;
}

// Vertices are the s-subsets of {0..m-1}, adjacent when they share s-1.
Graph johnson_graph(int m, int s) {
  std::vector<int> sets;
  for (int mask = 0; mask < (1 << m); ++mask)
    if (__builtin_popcount(mask) == s) sets.push_back(mask);
  Graph g;
  g.n = static_cast<int>(sets.size());
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j)
      if (__builtin_popcount(sets[i] & sets[j]) == s - 1) g.edges.emplace_back(i, j);
  return g;
}

Graph rook_4x4() {
  Graph g;
  g.n = 16;
  for (int i = 0; i < 16; ++i)
    for (int j = i + 1; j < 16; ++j)
      if (i / 4 == j / 4 || i % 4 == j % 4) g.edges.emplace_back(i, j);
  return g;
}

// Cayley graph of Z4 x Z4 with connection set {+-(0,1), +-(1,0), +-(1,1)}.
Graph shrikhande() {
  Graph g;
  g.n = 16;
  std::set<std::pair<int, int>> e;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (auto [da, db] : {std::pair{0, 1}, std::pair{1, 0}, std::pair{1, 1}}) {
        int u = a * 4 + b, v = (a + da) % 4 * 4 + (b + db) % 4;
        e.insert({std::min(u, v), std::max(u, v)});
      }
  g.edges.assign(e.begin(), e.end());
  return g;
}

Graph shuffled(const Graph& g, std::mt19937_64& rng) { return g.relabeled(oracle::random_perm(g.n, rng)); }

// Expanded coset against brute force over the whole group.
void expect_matches_brute_force(const GenSet& gens, const ColoredString& x, const ColoredString& y,
                                const IsoConfig& cfg) {
  auto c = main_string_iso(gens, x, y, cfg);
  auto grp = oracle::closure(gens);
  std::set<Permutation> expect;
  for (const auto& g : grp)
    if (act(x, g) == y) expect.insert(g);
  ASSERT_EQ(c.empty, expect.empty());
  if (c.empty) return;
  EXPECT_EQ(c.size(), BigInt(expect.size()));
  for (const auto& g : expect) EXPECT_TRUE(c.contains(g));
}

}  // namespace

TEST(MainIso, SpecExamples) {
  Graph tri = cycles({3});
  Graph path;
  path.n = 3;
  path.edges = {{0, 1}, {1, 2}};
  auto s = graph_to_string(tri, path);
  EXPECT_TRUE(main_string_iso(s.gens, s.x, s.y).empty);
  auto t = graph_to_string(path, path);
  auto c = main_string_iso(t.gens, t.x, t.x);
  ASSERT_FALSE(c.empty);
  EXPECT_TRUE(c.contains(Permutation(3)));
}

TEST(MainIso, RandomGroupsAgainstBruteForce) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 60; ++t) {
    int n = 4 + rng() % 5;
    GenSet g = oracle::random_gens(n, 1 + rng() % 2, rng);
    if (PermGroup(g).order() > 20000) continue;
    std::vector<int> l(n);
    for (auto& v : l) v = rng() % 2;
    ColoredString x(l, 2);
    ColoredString y = t % 2 ? act(x, oracle::random_perm(n, rng)) : x;
    IsoConfig cfg;
    cfg.prefer_alt = t % 3 == 0;
    expect_matches_brute_force(g, x, y, cfg);
  }
}

// With the alternating branch forced on, every pair of graphs on 5 or 6
// vertices (all of them up to isomorphism, each against a relabeled copy of
// every other) gets the oracle's verdict and automorphism group order.
TEST(MainIso, ForcedAlternatingBranchMatchesOracle) {
  std::mt19937_64 rng(4);
  IsoConfig cfg;
  cfg.prefer_alt = true;
  std::size_t alt_runs = 0;
  for (int n = 5; n <= 6; ++n) {
    auto graphs = all_graphs(n, false);
    for (std::size_t i = 0; i < graphs.size(); ++i)
      for (std::size_t j = i; j < graphs.size(); ++j) {
        if (graphs[i].edges.size() != graphs[j].edges.size()) continue;
        Graph b = shuffled(graphs[j], rng);
        auto r = graph_iso(graphs[i], b, cfg);
        ASSERT_EQ(r.isomorphic, i == j) << n << ' ' << i << ' ' << j;
        if (r.isomorphic) {
          EXPECT_EQ(r.aut_order, BigInt(brute_force_iso(graphs[i], graphs[i]).size()));
          EXPECT_EQ(graphs[i].relabeled(*r.iso).edges.size(), b.edges.size());
          for (auto [u, v] : graphs[i].relabeled(*r.iso).edges) EXPECT_TRUE(b.has_edge(u, v));
        }
        for (const auto& [k, v] : r.budget.branches)
          if (k.rfind("alt_", 0) == 0) alt_runs += v;
      }
  }
  EXPECT_GT(alt_runs, 100u);
}

TEST(MainIso, AlternatingOnlyImageHonorsParity) {
  std::mt19937_64 rng(9);
  int n = 10;
  Graph g = random_graph(n, 0.5, 123);
  // The first 30 generators' worth of randomness: pick an asymmetric graph.
  while (brute_force_iso(g, g, 10, 2).size() > 1) g = random_graph(n, 0.5, rng());
  auto s = graph_to_string(g, g);
  GenSet alt(s.gens.degree);
  std::vector<int> cyc;
  for (int i = 1; i < n; ++i) cyc.push_back(i);  // n even: a 9-cycle is even
  alt.gens = {pair_action(s, Permutation::from_cycles(n, {{0, 1, 2}})),
              pair_action(s, Permutation::from_cycles(n, {cyc}))};
  auto odd = Permutation::from_cycles(n, {{2, 7}});
  auto even = Permutation::from_cycles(n, {{2, 7}, {1, 4}});
  auto y_odd = act(s.x, pair_action(s, odd));
  auto y_even = act(s.x, pair_action(s, even));
  EXPECT_TRUE(main_string_iso(alt, s.x, y_odd).empty);
  auto c = main_string_iso(alt, s.x, y_even);
  ASSERT_FALSE(c.empty);
  EXPECT_EQ(c.rep, pair_action(s, even));
}

TEST(MainIso, StructuredGraphs) {
  std::mt19937_64 rng(1);
  struct Case {
    Graph a, b;
    bool iso;
    long long aut;
  };
  Graph petersen = johnson_graph(5, 2);
  for (auto& [u, v] : petersen.edges) (void)u, (void)v;
  std::vector<Case> cases = {
      {cycles({12}), cycles({6, 6}), false, 0},
      {cycles({5, 5}), cycles({10}), false, 0},
      {cycles({6, 6}), cycles({6, 6}), true, 288},
      {cycles({3, 3, 3, 3}), cycles({3, 3, 3, 3}), true, 31104},
      {complete_bipartite(6, 6), complete_bipartite(6, 6), true, 1036800},
      {complete_bipartite(4, 8), complete_bipartite(4, 8), true, 967680},
      {johnson_graph(6, 2), johnson_graph(6, 2), true, 720},
      {rook_4x4(), shrikhande(), false, 0},
      {shrikhande(), shrikhande(), true, 192},
  };
  for (const auto& c : cases) {
    auto r = graph_iso(c.a, shuffled(c.b, rng));
    EXPECT_EQ(r.isomorphic, c.iso) << c.a.n;
    if (c.iso) EXPECT_EQ(r.aut_order, BigInt(c.aut)) << c.a.n;
  }
}

TEST(MainIso, RandomGraphsOnTenToTwelveVertices) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 24; ++t) {
    int n = 10 + t % 3;
    Graph a = random_graph(n, 0.3 + 0.1 * (t % 4), rng());
    Graph b = t % 2 ? shuffled(a, rng) : random_graph(n, 0.3 + 0.1 * (t % 4), rng());
    auto r = graph_iso(a, b);
    EXPECT_EQ(r.isomorphic, brute_force_isomorphic(a, b));
    if (r.isomorphic)
      for (auto [u, v] : a.relabeled(*r.iso).edges) EXPECT_TRUE(b.has_edge(u, v));
  }
}

TEST(MainIso, BudgetRecordsBranches) {
  RecursionBudget b;
  auto s = graph_to_string(johnson_graph(6, 2), johnson_graph(6, 2));
  main_string_iso(s.gens, s.x, s.y, {}, &b);
  EXPECT_GT(b.node_counter, 0u);
  EXPECT_EQ(b.branches.count("alt_soj_johnson"), 1u);
}

TEST(MainIso, NodeCapIsReported) {
  IsoConfig cfg;
  cfg.node_cap = 5;
  auto s = graph_to_string(cycles({4, 4}), cycles({8}));
  EXPECT_THROW(main_string_iso(s.gens, s.x, s.x, cfg), ResourceError);
}

// Blocks {2i, 2i+1} permuted by Sym(m), each block reversible: every block
// reads "01", so the block structure is uniform and the certificate branch
// decides. Aut is the diagonal Sym(m).
GenSet reversible_blocks(int m) {
  int n = 2 * m;
  std::vector<int> cyc_img(n), tr_img(n);
  for (int i = 0; i < m; ++i) {
    int j = (i + 1) % m;
    cyc_img[2 * i] = 2 * j;
    cyc_img[2 * i + 1] = 2 * j + 1;
  }
  for (int p = 0; p < n; ++p) tr_img[p] = p;
  std::swap(tr_img[0], tr_img[2]);
  std::swap(tr_img[1], tr_img[3]);
  GenSet g(n);
  g.gens = {Permutation(cyc_img), Permutation(tr_img), Permutation::from_cycles(n, {{0, 1}})};
  return g;
}

TEST(MainIso, CertificateBranchOnUniformBlocks) {
  for (int m : {6, 9}) {
    GenSet g = reversible_blocks(m);
    int n = 2 * m;
    std::vector<int> l(n);
    for (int p = 0; p < n; ++p) l[p] = p % 2;
    ColoredString x(l, 2);
    auto h = PermGroup(g).chain().transversal(0)[5] * Permutation::from_cycles(n, {{6, 7}});
    ColoredString y = act(x, h);
    IsoConfig cfg;
    cfg.certificate_k = 3;
    cfg.prefer_alt = true;
    RecursionBudget b;
    auto c = main_string_iso(g, x, y, cfg, &b);
    ASSERT_FALSE(c.empty);
    EXPECT_EQ(c.size(), factorial(m));
    EXPECT_TRUE(c.contains(h));
    EXPECT_EQ(b.branches.count("certificates_alt_image"), 1u);
    if (m == 6) {
      IsoConfig plain;
      plain.use_alt = false;
      auto d = main_string_iso(g, x, y, plain);
      EXPECT_EQ(d.size(), c.size());
      EXPECT_TRUE(d.contains(c.rep));
    }
    // One block flipped against the rest cannot be matched.
    std::vector<int> l2 = l;
    std::swap(l2[0], l2[1]);
    std::swap(l2[2], l2[3]);
    l2[2] = 0;
    l2[3] = 0;
    l2[4] = 1;
    l2[5] = 1;
    EXPECT_TRUE(main_string_iso(g, x, ColoredString(l2, 2), cfg).empty);
  }
}
