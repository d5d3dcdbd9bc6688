#include <cmath>
#include <queue>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "giso/errors.hpp"
#include "giso/schemes.hpp"
#include "giso/wl.hpp"
#include "oracles.hpp"

namespace giso {
namespace {

Configuration cyclic_difference(int n) {
  std::vector<int> col(n * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) col[x * n + y] = ((y - x) % n + n) % n;
  return Configuration::from_colors(n, 2, col);
}

// Group on the k-subsets of {0..m-1} induced by permutations of {0..m-1}.
GenSet induced_on_subsets(int m, int k, const std::vector<Permutation>& gens) {
  auto pts = k_subsets(m, k);
  std::map<std::vector<int>, int> index;
  for (std::size_t i = 0; i < pts.size(); ++i) index[pts[i]] = static_cast<int>(i);
  GenSet out(static_cast<int>(pts.size()));
  for (const auto& g : gens) {
    std::vector<int> img(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      std::vector<int> s;
      for (int p : pts[i]) s.push_back(g[p]);
      std::sort(s.begin(), s.end());
      img[i] = index[s];
    }
    out.gens.emplace_back(img);
  }
  return out;
}

std::vector<Permutation> alt_gens(int m) {
  // (0 1 2) and an m-cycle or (m-1)-cycle of the right parity.
  std::vector<int> c;
  for (int i = (m % 2 ? 0 : 1); i < m; ++i) c.push_back(i);
  return {Permutation::from_cycles(m, {{0, 1, 2}}), Permutation::from_cycles(m, {c})};
}

void expect_valid(const Configuration& c, const JohnsonId& id) {
  int n = c.gamma_size();
  EXPECT_EQ(binomial(id.m, id.s), n);
  for (int x = 0; x < n; ++x) {
    ASSERT_EQ(static_cast<int>(id.iota[x].size()), id.s);
    for (int y = 0; y < n; ++y) {
      std::vector<int> common;
      std::set_intersection(id.iota[x].begin(), id.iota[x].end(), id.iota[y].begin(),
                            id.iota[y].end(), std::back_inserter(common));
      ASSERT_EQ(static_cast<int>(common.size()),
                id.color_to_intersection[c.color(Tuple{x, y})]);
    }
  }
}

TEST(Classify, Examples) {
  auto clique = classify_classical(fixture::graph(6, fixture::complete(6)));
  EXPECT_TRUE(clique.trivial_clique);
  EXPECT_TRUE(clique.primitive);
  EXPECT_FALSE(clique.uniprimitive);

  auto j = classify_classical(johnson_scheme(6, 2));
  EXPECT_TRUE(j.homogeneous);
  EXPECT_TRUE(j.uniprimitive);

  auto z4 = cyclic_difference(4);
  auto s = classify_classical(z4);
  EXPECT_FALSE(s.primitive);
  EXPECT_EQ(color_components(z4, 2), (std::vector<std::vector<int>>{{0, 2}, {1, 3}}));
  EXPECT_THROW(classify_classical(fixture::graph(5, fixture::path(5))), InputError);
}

TEST(Johnson, Sizes) {
  auto j52 = johnson_scheme(5, 2);
  EXPECT_EQ(j52.gamma_size(), 10);
  EXPECT_EQ(j52.num_colors(), 3);
  auto j62 = johnson_scheme(6, 2);
  auto sizes = j62.class_sizes();
  EXPECT_EQ(sizes[0], 15u);
  EXPECT_EQ(sizes[1], 120u);
  EXPECT_EQ(sizes[2], 90u);
  for (int m = 5; m <= 8; ++m) EXPECT_TRUE(check_coherent(johnson_scheme(m, 2)).is_coherent);
  for (int m = 7; m <= 8; ++m) EXPECT_TRUE(check_coherent(johnson_scheme(m, 3)).is_coherent);
  EXPECT_THROW(johnson_scheme(4, 2), InputError);
  EXPECT_THROW(johnson_scheme(6, 1), InputError);
}

TEST(Johnson, IdentifyPublishedTable) {
  const char* rows[15] = {
      "xzyyzyyzzzyyzzz", "zxyzzyyyzyzzzzy", "yyxyyzzzyzzzzzy", "yzyxzzzyzyzzyyz",
      "zzyzxyyzyzzzyyz", "yyzzyxzzzyzyyzz", "yyzzyzxyzzyzzyz", "zyzyzzyxyzzyyzz",
      "zzyzyzzyxyyyzzz", "zyzyzyzzyxyzzyz", "yzzzzzyzyyxzyzy", "yzzzzyzyyzzxzyy",
      "zzzyyyzyzzyzxzy", "zzzyyzyzzyzyzxy", "zyyzzzzzzzyyyyx"};
  std::vector<int> col(225);
  for (int a = 0; a < 15; ++a)
    for (int b = 0; b < 15; ++b) col[a * 15 + b] = rows[a][b] - 'x';
  auto c = Configuration::from_colors(15, 2, col);
  ASSERT_TRUE(check_coherent(c).is_coherent);
  EXPECT_EQ(c.class_sizes(), (std::vector<std::size_t>{15, 90, 120}));
  IdentifyFailure why;
  auto id = identify_johnson(c, 6, 2, &why);
  ASSERT_TRUE(id.has_value()) << why.reason;
  // Points are v1..v15 in the table; here 0..14.
  std::vector<std::vector<int>> lambda = {{0, 4, 7, 9, 14},  {0, 1, 8, 12, 13},
                                          {1, 3, 4, 10, 11}, {2, 6, 9, 11, 12},
                                          {2, 5, 7, 10, 13}, {3, 5, 6, 8, 14}};
  EXPECT_EQ(id->lambda, lambda);
  std::vector<std::vector<int>> iota = {{0, 1}, {1, 2}, {3, 4}, {2, 5}, {0, 2},
                                        {4, 5}, {3, 5}, {0, 4}, {1, 5}, {0, 3},
                                        {2, 4}, {2, 3}, {1, 3}, {1, 4}, {0, 5}};
  EXPECT_EQ(id->iota, iota);
  EXPECT_EQ(id->color_to_intersection, (std::vector<int>{2, 0, 1}));
  expect_valid(c, *id);
}

TEST(Johnson, IdentifyRelabeled) {
  std::mt19937_64 rng(31);
  for (auto [m, s] : std::vector<std::pair<int, int>>{{6, 2}, {7, 2}, {8, 2}, {15, 3}}) {
    auto j = johnson_scheme(m, s);
    auto g = oracle::random_perm(j.gamma_size(), rng);
    auto c = relabel(j, g.images());
    IdentifyFailure why;
    auto id = identify_johnson(c, m, s, &why);
    ASSERT_TRUE(id.has_value()) << m << "," << s << ": " << why.reason;
    EXPECT_EQ(id->m, m);
    EXPECT_EQ(id->s, s);
    expect_valid(c, *id);
  }
}

TEST(Johnson, SmallLambdaUsesDistanceConstruction) {
  // Below m = (s+1)^2 - 2 the largest orbital is not disjointness; the
  // distance construction covers every m >= 2s, including m = 2s.
  std::mt19937_64 rng(41);
  for (auto [m, s] : std::vector<std::pair<int, int>>{
           {7, 3}, {6, 3}, {8, 3}, {8, 4}, {9, 4}, {4, 2}, {5, 2}, {10, 5}}) {
    // johnson_scheme stops at m = 2s + 1; the orbitals of Sym(m) give the rest.
    std::vector<int> cyc(m);
    std::iota(cyc.begin(), cyc.end(), 0);
    auto j = m > 2 * s ? johnson_scheme(m, s)
                       : orbital_configuration(induced_on_subsets(
                             m, s, {Permutation::from_cycles(m, {{0, 1}}),
                                    Permutation::from_cycles(m, {cyc})}));
    auto c = relabel(j, oracle::random_perm(j.gamma_size(), rng).images());
    IdentifyFailure why;
    auto id = identify_johnson(c, m, s, &why);
    ASSERT_TRUE(id.has_value()) << m << "," << s << ": " << why.reason;
    expect_valid(c, *id);
  }
}

TEST(AltAction, SmallDegreeSubsetActions) {
  for (auto [m, k] : std::vector<std::pair<int, int>>{{7, 3}, {8, 4}}) {
    auto g = induced_on_subsets(m, k, alt_gens(m));
    IdentifyFailure why;
    auto id = try_identify_alt_action(g, m, k, &why);
    ASSERT_TRUE(id.has_value()) << m << "," << k << ": " << why.reason;
    EXPECT_EQ(id->m, m);
    EXPECT_EQ(id->k, k);
  }
}

TEST(Johnson, NonJohnsonInputs) {
  // Petersen is the disjointness graph of 2-subsets of 5 points.
  auto pet = fixture::graph(10, fixture::petersen());
  IdentifyFailure why;
  auto id = identify_johnson(pet, 0, 0, &why);
  if (id) expect_valid(pet, *id);
  else EXPECT_FALSE(why.reason.empty());

  for (auto c : {fixture::graph(5, fixture::cycle(5)), cyclic_difference(6),
                 wl(fixture::graph(6, fixture::cycle(6)))}) {
    IdentifyFailure w;
    auto r = identify_johnson(c, 0, 0, &w);
    if (r) expect_valid(c, *r);
    EXPECT_FALSE(r.has_value());
    EXPECT_FALSE(w.reason.empty());
  }
  // Right structure, wrong claim.
  EXPECT_FALSE(identify_johnson(johnson_scheme(7, 2), 6, 2).has_value());
}

TEST(AltAction, RecoversSubsetAction) {
  for (auto [m, k] : std::vector<std::pair<int, int>>{{6, 2}, {7, 2}, {9, 2}, {9, 3}}) {
    auto gens = induced_on_subsets(m, k, alt_gens(m));
    auto id = identify_alt_action(gens, m, k);
    EXPECT_EQ(id.m, m);
    EXPECT_EQ(id.k, k);
    EXPECT_TRUE(id.images_even);
    EXPECT_EQ(PermGroup(id.images).order(), factorial(m) / 2);
    // The identity holds on every generator and point.
    for (std::size_t j = 0; j < gens.gens.size(); ++j)
      for (int w = 0; w < gens.degree; ++w) {
        std::vector<int> moved;
        for (int i : id.iota[w]) moved.push_back(id.images.gens[j][i]);
        std::sort(moved.begin(), moved.end());
        ASSERT_EQ(moved, id.iota[gens.gens[j][w]]);
      }
  }
}

TEST(AltAction, SymmetricAndNatural) {
  std::vector<Permutation> sym = {Permutation::from_cycles(7, {{0, 1}}),
                                  Permutation::from_cycles(7, {{0, 1, 2, 3, 4, 5, 6}})};
  auto id = identify_alt_action(induced_on_subsets(7, 2, sym), 7, 2);
  EXPECT_FALSE(id.images_even);
  GenSet nat(7);
  nat.gens = alt_gens(7);
  auto n1 = identify_alt_action(nat, 7, 1);
  EXPECT_EQ(n1.m, 7);
  EXPECT_EQ(n1.images.gens, nat.gens);
  GenSet intrans(6);
  intrans.gens = {Permutation::from_cycles(6, {{0, 1, 2}})};
  EXPECT_THROW(identify_alt_action(intrans, 6, 1), InputError);
  EXPECT_THROW(identify_alt_action(induced_on_subsets(7, 2, sym), 8, 2), InputError);
}

TEST(Designs, Fano) {
  auto d = check_design(7, fixture::fano(), 2);
  EXPECT_TRUE(d.is_t_design);
  EXPECT_EQ(d.lambda, 1);
  EXPECT_EQ(d.b, 7);
  EXPECT_TRUE(d.count_formula_ok);
  EXPECT_TRUE(d.fisher_ok);
  EXPECT_EQ(d.b, d.v);
  EXPECT_THROW(check_design(7, {{0, 1}, {0, 1, 2}}, 2), InputError);
}

TEST(Designs, CompleteHypergraph) {
  for (int v = 4; v <= 8; ++v)
    for (int u = 2; u < v; ++u) {
      auto d = check_design(v, k_subsets(v, u), u);
      EXPECT_TRUE(d.is_t_design);
      EXPECT_EQ(d.lambda, 1);
      EXPECT_TRUE(d.count_formula_ok);
      EXPECT_TRUE(d.rw_bound_ok);
    }
}

TEST(Designs, ExhaustiveFisher) {
  // Every 2-design on v <= 6 points with simple blocks satisfies b >= v.
  int found = 0;
  for (int v = 4; v <= 6; ++v)
    for (int u = 2; u < v; ++u) {
      auto blocks = k_subsets(v, u);
      if (blocks.size() > 20) continue;
      std::vector<std::pair<int, int>> pairs;
      for (int a = 0; a < v; ++a)
        for (int b = a + 1; b < v; ++b) pairs.emplace_back(a, b);
      std::vector<std::uint32_t> mask(blocks.size());
      for (std::size_t i = 0; i < blocks.size(); ++i)
        for (int p : blocks[i]) mask[i] |= 1u << p;
      for (std::uint32_t pick = 1; pick < (1u << blocks.size()); ++pick) {
        int lambda = -1;
        bool ok = true;
        for (auto [a, b] : pairs) {
          int cnt = 0;
          for (std::size_t i = 0; i < blocks.size(); ++i)
            cnt += (pick >> i & 1) && (mask[i] >> a & 1) && (mask[i] >> b & 1);
          if (lambda == -1) lambda = cnt;
          if (cnt != lambda || cnt == 0) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        ++found;
        EXPECT_GE(__builtin_popcount(pick), v);
        if (found % 50 == 1) {
          std::vector<std::vector<int>> edges;
          for (std::size_t i = 0; i < blocks.size(); ++i)
            if (pick >> i & 1) edges.push_back(blocks[i]);
          auto d = check_design(v, edges, 2);
          EXPECT_TRUE(d.is_t_design);
          EXPECT_TRUE(d.fisher_ok);
          EXPECT_TRUE(d.count_formula_ok);
        }
      }
    }
  EXPECT_GT(found, 0);
}

TEST(Semiregular, CoherentInputsPass) {
  auto fano = fixture::design(7, fixture::fano(), false);
  auto r = semiregular_checks(fano);
  EXPECT_TRUE(r.ok);
  EXPECT_TRUE(r.triples_checked);
  std::mt19937_64 rng(32);
  for (int it = 0; it < 20; ++it) {
    int n = 4 + rng() % 5;
    std::vector<int> col(n * n);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) col[x * n + y] = x == y ? (x < n / 2 ? 0 : 1) : 2 + rng() % 2;
    auto c = wl(f2_config(Configuration::from_colors(n, 2, col)));
    auto rep = semiregular_checks(c);
    EXPECT_TRUE(rep.ok);
  }
}

TEST(Semiregular, NonCoherentBipartiteWitness) {
  std::mt19937_64 rng(33);
  int with_witness = 0;
  for (int it = 0; it < 30; ++it) {
    int a = 3, b = 4, n = a + b;
    std::vector<int> col(n * n);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        bool xa = x < a, ya = y < a;
        if (x == y) col[x * n + y] = xa ? 0 : 1;
        else if (xa == ya) col[x * n + y] = xa ? 2 : 3;
        else col[x * n + y] = (xa ? 4 : 6) + (rng() % 2);
      }
    auto c = Configuration::from_colors(n, 2, col);
    auto rep = semiregular_checks(c);
    if (!check_coherent(c).is_coherent && !rep.ok) {
      ++with_witness;
      const auto& w = rep.witnesses[0];
      EXPECT_NE(w.degree_first, w.degree_second);
    }
    if (rep.ok) EXPECT_TRUE(rep.witnesses.empty());
  }
  EXPECT_GT(with_witness, 20);
}

// Library of coherent homogeneous schemes for property checks.
std::vector<Configuration> scheme_library() {
  std::vector<Configuration> out = {johnson_scheme(5, 2), johnson_scheme(6, 2),
                                    johnson_scheme(7, 3), fixture::graph(10, fixture::petersen()),
                                    fixture::graph(5, fixture::cycle(5)), cyclic_difference(6),
                                    cyclic_difference(8), wl(fixture::graph(8, fixture::cycle(8)))};
  // Imprimitive orbital schemes: S_3 wr S_2 and S_2 wr S_3.
  GenSet w1(6), w2(6);
  w1.gens = {Permutation::from_cycles(6, {{0, 1, 2}}), Permutation::from_cycles(6, {{0, 1}}),
             Permutation::from_cycles(6, {{0, 3}, {1, 4}, {2, 5}})};
  w2.gens = {Permutation::from_cycles(6, {{0, 1}}),
             Permutation::from_cycles(6, {{0, 2, 4}, {1, 3, 5}}),
             Permutation::from_cycles(6, {{0, 2}, {1, 3}})};
  out.push_back(orbital_configuration(w1));
  out.push_back(orbital_configuration(w2));
  return out;
}

int gamma_of(const Configuration& c, int r_inv, int r, int j) {
  return intersection_number(c, {r_inv, r}, j);
}

int inverse_color(const Configuration& c, int r) {
  int n = c.gamma_size();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (c.color(Tuple{x, y}) == r) return c.color(Tuple{y, x});
  return -1;
}

TEST(SchemeProperties, DegreesAndComponents) {
  for (const auto& c : scheme_library()) {
    ASSERT_TRUE(check_coherent(c).is_coherent);
    auto s = classify_classical(c);
    ASSERT_TRUE(s.homogeneous);
    int vc = s.vertex_colors[0];
    for (const auto& g : s.color_graphs) {
      // gamma(r^-1, r, vertex) counts z with c(z,x) = r^-1 and c(x,z) = r.
      EXPECT_EQ(g.out_degree, gamma_of(c, inverse_color(c, g.color), g.color, vc));
      for (const auto& comp : g.components) EXPECT_EQ(comp.size(), g.components[0].size());
    }
    EXPECT_TRUE(semiregular_checks(c).ok);
  }
}

TEST(SchemeProperties, ImprimitiveDichotomy) {
  int seen = 0;
  for (const auto& c : scheme_library()) {
    auto s = classify_classical(c);
    if (s.primitive) continue;
    for (const auto& g : s.color_graphs) {
      if (g.components.size() == 1) continue;
      ++seen;
      std::vector<int> block(c.gamma_size());
      for (std::size_t i = 0; i < g.components.size(); ++i)
        for (int p : g.components[i]) block[p] = static_cast<int>(i);
      for (const auto& h : s.color_graphs) {
        bool inside = true, across = true;
        for (int x = 0; x < c.gamma_size(); ++x)
          for (int y = 0; y < c.gamma_size(); ++y)
            if (c.color(Tuple{x, y}) == h.color) {
              inside = inside && block[x] == block[y];
              across = across && block[x] != block[y];
            }
        EXPECT_TRUE(inside || across);
      }
    }
  }
  EXPECT_GT(seen, 3);
}

TEST(SchemeProperties, Uniprimitive) {
  int seen = 0;
  for (const auto& c : scheme_library()) {
    auto s = classify_classical(c);
    if (!s.uniprimitive) continue;
    ++seen;
    int n = c.gamma_size();
    for (const auto& g : s.color_graphs) {
      // Complement of each color graph has diameter 2.
      for (int src = 0; src < n; ++src) {
        std::vector<int> dist(n, -1);
        std::queue<int> q;
        dist[src] = 0;
        q.push(src);
        while (!q.empty()) {
          int x = q.front();
          q.pop();
          for (int y = 0; y < n; ++y)
            if (dist[y] == -1 && c.color(Tuple{x, y}) != g.color) dist[y] = dist[x] + 1, q.push(y);
        }
        for (int y = 0; y < n; ++y) {
          ASSERT_GE(dist[y], 0);
          EXPECT_LE(dist[y], 2);
        }
      }
      // Some other color has out-degree at least the square root.
      bool found = false;
      for (const auto& h : s.color_graphs)
        found = found || (h.color != g.color && h.out_degree >= std::sqrt(double(g.out_degree)));
      EXPECT_TRUE(found);
    }
  }
  EXPECT_GE(seen, 4);
}

TEST(SchemeProperties, StronglyRegularIffCoherent) {
  EXPECT_TRUE(check_coherent(fixture::graph(4, fixture::cycle(4))).is_coherent);
  EXPECT_TRUE(check_coherent(fixture::graph(5, fixture::cycle(5))).is_coherent);
  EXPECT_FALSE(check_coherent(fixture::graph(6, fixture::cycle(6))).is_coherent);
  EXPECT_TRUE(check_coherent(fixture::graph(10, fixture::petersen())).is_coherent);
  EXPECT_FALSE(check_coherent(fixture::graph(4, fixture::path(4))).is_coherent);
}

}  // namespace
}  // namespace giso
