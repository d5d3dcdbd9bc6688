#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "giso/certificates.hpp"
#include "giso/errors.hpp"
#include "giso/schemes.hpp"
#include "oracles.hpp"

using namespace giso;

namespace {

std::vector<Permutation> alt_gens(int m) {
  std::vector<int> c;
  for (int i = (m % 2 ? 0 : 1); i < m; ++i) c.push_back(i);
  return {Permutation::from_cycles(m, {{0, 1, 2}}), Permutation::from_cycles(m, {c})};
}

std::vector<Permutation> sym_gens(int m) {
  std::vector<int> c(m);
  for (int i = 0; i < m; ++i) c[i] = i;
  return {Permutation::from_cycles(m, {{0, 1}}), Permutation::from_cycles(m, {c})};
}

Permutation on_pairs(int m, const Permutation& g) {
  auto pts = k_subsets(m, 2);
  std::map<std::vector<int>, int> index;
  for (std::size_t i = 0; i < pts.size(); ++i) index[pts[i]] = static_cast<int>(i);
  std::vector<int> img(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<int> s{g[pts[i][0]], g[pts[i][1]]};
    std::sort(s.begin(), s.end());
    img[i] = index[s];
  }
  return Permutation(img);
}

// G = <gens> acting on the 2-subsets of {0..m-1}, phi the action on points.
PhiMap pairs_phi(int m, const std::vector<Permutation>& gens) {
  GenSet src(m * (m - 1) / 2), img(m);
  for (const auto& g : gens) {
    src.gens.push_back(on_pairs(m, g));
    img.gens.push_back(g);
  }
  return PhiMap(src, img);
}

// G = <gens> acting on {0..m-1}, phi the identity.
PhiMap natural_phi(int m, const std::vector<Permutation>& gens) {
  GenSet g(m);
  g.gens = gens;
  return PhiMap(g, g);
}

ColoredString random_string(int n, int sigma, std::mt19937_64& rng) {
  std::vector<int> l(n);
  for (auto& v : l) v = static_cast<int>(rng() % sigma);
  return ColoredString(l, sigma);
}

BigInt fact(int k) { return factorial(k); }

}  // namespace

TEST(PhiMap, ImagesOfRandomElements) {
  std::mt19937_64 rng(3);
  int m = 6;
  auto phi = pairs_phi(m, sym_gens(m));
  for (int t = 0; t < 30; ++t) {
    auto g = oracle::random_perm(m, rng);
    EXPECT_EQ(phi.image_of(on_pairs(m, g)), g);
  }
  auto alt = pairs_phi(m, alt_gens(m));
  EXPECT_THROW(alt.image_of(on_pairs(m, Permutation::from_cycles(m, {{0, 1}}))), InputError);
}

TEST(PhiMap, RejectsNonHomomorphism) {
  GenSet src(5), img(5);
  auto t = Permutation::from_cycles(5, {{0, 1}});
  src.gens = {t, t};
  img.gens = {t, Permutation(5)};
  EXPECT_THROW(PhiMap(src, img), InputError);
}

TEST(PhiMap, RestrictionKeepsImages) {
  int m = 5;
  auto phi = pairs_phi(m, sym_gens(m));
  GenSet sub(10);
  sub.gens = {on_pairs(m, Permutation::from_cycles(m, {{0, 1, 2}}))};
  auto r = phi.restrict_to_subgroup(sub);
  EXPECT_EQ(r.images().gens[0], Permutation::from_cycles(m, {{0, 1, 2}}));
}

TEST(ContainsAlt, SmallGroups) {
  GenSet a(5);
  for (const auto& g : alt_gens(5)) a.gens.push_back(g);
  EXPECT_TRUE(contains_alt_on(a, {0, 1, 2, 3, 4}));
  GenSet d(5);
  d.gens = {Permutation::from_cycles(5, {{0, 1, 2, 3, 4}}),
            Permutation::from_cycles(5, {{1, 4}, {2, 3}})};
  EXPECT_FALSE(contains_alt_on(d, {0, 1, 2, 3, 4}));
  GenSet s(6);
  s.gens = {Permutation::from_cycles(6, {{0, 1}}), Permutation::from_cycles(6, {{0, 1, 2, 3}})};
  EXPECT_TRUE(contains_alt_on(s, {0, 1, 2, 3}));
  EXPECT_THROW(contains_alt_on(s, {0, 1}), InputError);
}

TEST(AffectedPoints, MatchesStabilizerOrders) {
  // Sym(5) on 2-subsets: a pair's stabilizer maps onto Sym(2) x Sym(3).
  auto phi = pairs_phi(5, sym_gens(5));
  auto rep = affected_points(phi);
  EXPECT_EQ(rep.affected.size(), 10u);
  EXPECT_EQ(rep.alt_order, BigInt(60));
  for (const auto& o : rep.stabilizer_image_order) EXPECT_EQ(o, BigInt(12));

  // Sym(5) x C2 on 5 + 2 points: the two extra points are unaffected.
  GenSet src(7), img(5);
  for (const auto& g : sym_gens(5)) {
    std::vector<int> v(g.images());
    v.push_back(5);
    v.push_back(6);
    src.gens.emplace_back(v);
    img.gens.push_back(g);
  }
  src.gens.push_back(Permutation::from_cycles(7, {{5, 6}}));
  img.gens.push_back(Permutation(5));
  auto rep2 = affected_points(PhiMap(src, img));
  EXPECT_EQ(rep2.affected, (std::vector<int>{0, 1, 2, 3, 4}));
  EXPECT_EQ(rep2.stabilizer_image_order[5], BigInt(120));
}

// In the natural action a certificate is full exactly when x is constant on
// T; the window is T and the group order is a product of factorials.
TEST(LocalCertificate, NaturalActionOracle) {
  std::mt19937_64 rng(11);
  auto solver = default_solver();
  int m = 7;
  auto phi = natural_phi(m, sym_gens(m));
  for (int t = 0; t < 4; ++t) {
    auto x = random_string(m, 2, rng);
    for (const auto& T : k_subsets(m, 3)) {
      auto c = local_certificate(phi, T, x, solver);
      std::map<int, int> hist;
      for (int p : T) ++hist[x[p]];
      EXPECT_EQ(c.full, hist.size() == 1);
      EXPECT_EQ(c.window, T);
      BigInt expect = 1;
      if (c.full) expect = fact(3);  // K(T) fixes everything outside T
      else
        for (auto [l, cnt] : hist) expect *= fact(cnt);
      EXPECT_EQ(c.order, expect);
    }
  }
}

TEST(LocalCertificate, FullGroupFixesXAndIsAltOnT) {
  std::mt19937_64 rng(5);
  auto solver = default_solver();
  int m = 7;
  auto phi = pairs_phi(m, sym_gens(m));
  int full = 0, not_full = 0;
  for (int t = 0; t < 6; ++t) {
    // Sparse graphs give a mix of both outcomes.
    std::vector<int> l(21, 0);
    for (auto& v : l) v = rng() % 5 == 0;
    ColoredString x(l, 2);
    for (const auto& T : k_subsets(m, 3)) {
      auto c = local_certificate(phi, T, x, solver);
      auto k = PhiMap::from_pairs(c.group, m, 21);
      if (c.full) {
        ++full;
        EXPECT_TRUE(contains_alt_on(k.images(), T));
        for (const auto& g : k.source().gens) EXPECT_EQ(act(x, g), x);
      } else {
        ++not_full;
        EXPECT_LT(c.order, BigInt(3));
      }
    }
  }
  EXPECT_GT(full, 0);
  EXPECT_GT(not_full, 0);
}

TEST(LocalCertificate, CanonicalUnderTheGroup) {
  std::mt19937_64 rng(8);
  auto solver = default_solver();
  int m = 7;
  auto phi = pairs_phi(m, sym_gens(m));
  for (int t = 0; t < 20; ++t) {
    std::vector<int> l(21, 0);
    for (auto& v : l) v = rng() % 4 == 0;
    ColoredString x(l, 2);
    auto T = k_subsets(m, 3)[rng() % 35];
    auto g = oracle::random_perm(m, rng);
    auto gp = on_pairs(m, g);
    std::vector<int> Tg;
    for (int p : T) Tg.push_back(g[p]);
    auto c1 = local_certificate(phi, T, x, solver);
    auto c2 = local_certificate(phi, Tg, act(x, gp), solver);
    EXPECT_EQ(c1.full, c2.full);
    EXPECT_EQ(c1.order, c2.order);
    std::vector<int> wg;
    for (int p : c1.window) wg.push_back(gp[p]);
    std::sort(wg.begin(), wg.end());
    EXPECT_EQ(wg, c2.window);
  }
}

TEST(LocalCertificate, RejectsSmallImage) {
  GenSet d(5);
  d.gens = {Permutation::from_cycles(5, {{0, 1, 2, 3, 4}})};
  PhiMap phi(d, d);
  ColoredString x(std::vector<int>(5, 0), 1);
  EXPECT_THROW(local_certificate(phi, {0, 1, 2}, x, default_solver()), InputError);
}

// Brute force over Sym(5) on pairs: g sends T to T2 in order, the windows to
// each other, and agrees with the strings on the window.
TEST(CompareCertificates, MatchesBruteForce) {
  std::mt19937_64 rng(21);
  auto solver = default_solver();
  int m = 5;
  auto phi = pairs_phi(m, sym_gens(m));
  auto all = oracle::all_perms(m);
  for (int t = 0; t < 12; ++t) {
    std::vector<int> l(10, 0);
    for (auto& v : l) v = rng() % 3 == 0;
    ColoredString x(l, 2);
    auto h = on_pairs(m, oracle::random_perm(m, rng));
    auto x2 = t % 3 ? act(x, h) : random_string(10, 2, rng);
    std::vector<int> T{0, 1, 2}, T2{static_cast<int>(rng() % 5), 0, 0};
    do {
      T2[1] = rng() % 5;
      T2[2] = rng() % 5;
    } while (T2[1] == T2[0] || T2[2] == T2[0] || T2[1] == T2[2]);
    auto c1 = local_certificate(phi, T, x, solver);
    auto c2 = local_certificate(phi, T2, x2, solver);
    auto got = compare_certificates(phi, x, x2, T, T2, solver, &c1, &c2);
    std::size_t expect = 0;
    for (const auto& g : all) {
      bool ok = c1.full == c2.full && c1.window.size() == c2.window.size();
      for (int i = 0; i < 3 && ok; ++i) ok = g[T[i]] == T2[i];
      auto gp = on_pairs(m, g);
      std::set<int> w2(c2.window.begin(), c2.window.end());
      for (int p : c1.window) ok = ok && w2.count(gp[p]) && x[p] == x2[gp[p]];
      if (ok) {
        ++expect;
        EXPECT_TRUE(got.contains(gp));
      }
    }
    EXPECT_EQ(got.size(), BigInt(expect));
  }
}

TEST(CompareCertificates, SelfComparisonContainsIdentity) {
  std::mt19937_64 rng(2);
  int m = 6;
  auto phi = pairs_phi(m, alt_gens(m));
  auto x = random_string(15, 2, rng);
  auto got = compare_certificates(phi, x, x, {1, 3, 4}, {1, 3, 4}, default_solver());
  ASSERT_FALSE(got.empty);
  EXPECT_TRUE(got.contains(Permutation(15)));
}

TEST(Aggregate, CaseOneAndTwoA) {
  auto solver = default_solver();
  FirstChooser ch;
  int m = 6;
  auto phi = natural_phi(m, sym_gens(m));
  // Two color classes of size 3: the orbits are the classes.
  ColoredString x({0, 0, 0, 1, 1, 1}, 2);
  std::vector<Certificate> certs;
  for (const auto& T : k_subsets(m, 3)) certs.push_back(local_certificate(phi, T, x, solver));
  auto out = aggregate_certificates(phi, x, certs, ch, solver);
  EXPECT_EQ(out.kind, AggregateOutcome::Case::One);
  EXPECT_EQ(out.orbit_length, std::vector<int>(6, 3));

  ColoredString y({0, 0, 0, 0, 1, 1}, 2);
  certs.clear();
  for (const auto& T : k_subsets(m, 3)) certs.push_back(local_certificate(phi, T, y, solver));
  auto out2 = aggregate_certificates(phi, y, certs, ch, solver);
  EXPECT_EQ(out2.kind, AggregateOutcome::Case::TwoA);
  EXPECT_EQ(out2.big_orbit, (std::vector<int>{0, 1, 2, 3}));
}

TEST(Aggregate, CaseTwoBFromHandBuiltCertificates) {
  auto solver = default_solver();
  int m = 7;
  auto phi = natural_phi(m, sym_gens(m));
  ColoredString x(std::vector<int>(7, 0), 1);
  auto make = [&](std::vector<Permutation> gens) {
    Certificate c;
    c.full = true;
    c.T = {0, 1, 2};
    c.group = GenSet(14);
    for (const auto& g : gens) c.group.gens.push_back(pair_perm(g, g));
    return std::vector<Certificate>{c};
  };
  auto shift = Permutation::from_cycles(7, {{0, 1, 2, 3, 4, 5, 6}});
  // x -> 2x and x -> 3x modulo 7.
  auto sq = Permutation::from_cycles(7, {{1, 2, 4}, {3, 6, 5}});
  auto gen = Permutation::from_cycles(7, {{1, 3, 2, 6, 4, 5}});

  FirstChooser ch;
  auto f21 = aggregate_certificates(phi, x, make({shift, sq}), ch, solver);
  EXPECT_EQ(f21.kind, AggregateOutcome::Case::TwoB);
  EXPECT_EQ(f21.transitivity, 1);
  EXPECT_TRUE(f21.fixed.empty());
  ASSERT_TRUE(f21.schurian.has_value());
  EXPECT_EQ(f21.schurian->gamma_size(), 7);

  FirstChooser ch2;
  auto agl = aggregate_certificates(phi, x, make({shift, gen}), ch2, solver);
  EXPECT_EQ(agl.kind, AggregateOutcome::Case::TwoB);
  EXPECT_EQ(agl.transitivity, 2);
  EXPECT_EQ(agl.fixed, std::vector<int>{0});
  EXPECT_EQ(agl.rest.size(), 6u);
  EXPECT_EQ(agl.trail.index_cost, BigInt(7));
}

// With no full certificates, tuples are classed by comparison; the classes
// must agree with brute force over Sym(5) on pairs.
TEST(Aggregate, CaseThreeClassesMatchBruteForce) {
  auto solver = default_solver();
  int m = 5;
  auto phi = pairs_phi(m, sym_gens(m));
  // A path 0-1-2-3 plus the isolated vertex 4.
  std::vector<int> l(10, 0);
  auto pts = k_subsets(m, 2);
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (pts[i][1] == pts[i][0] + 1 && pts[i][1] <= 3) l[i] = 1;
  ColoredString x(l, 2);
  std::vector<Certificate> certs;
  for (const auto& T : k_subsets(m, 3)) certs.push_back(local_certificate(phi, T, x, solver));
  for (const auto& c : certs) ASSERT_FALSE(c.full);
  FirstChooser ch;
  auto out = aggregate_certificates(phi, x, certs, ch, solver);
  ASSERT_EQ(out.kind, AggregateOutcome::Case::Three);
  EXPECT_EQ(out.rest.size(), 5u);
  ASSERT_TRUE(out.relation.has_value());
  auto all = oracle::all_perms(m);
  std::map<std::vector<int>, Certificate> by;
  for (const auto& c : certs) by[c.T] = c;
  auto sorted = [](std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  std::map<Tuple, int> cls(out.tuple_class.begin(), out.tuple_class.end());
  for (auto [t1, c1] : out.tuple_class)
    for (auto [t2, c2] : out.tuple_class) {
      if (c1 < 0 || c2 < 0) continue;
      const auto& a = by[sorted(t1)];
      const auto& b = by[sorted(t2)];
      bool related = false;
      for (const auto& g : all) {
        bool ok = a.full == b.full && a.window.size() == b.window.size();
        for (int i = 0; i < 3 && ok; ++i) ok = g[t1[i]] == t2[i];
        auto gp = on_pairs(m, g);
        std::set<int> w2(b.window.begin(), b.window.end());
        for (int p : a.window) ok = ok && w2.count(gp[p]) && x[p] == x[gp[p]];
        if (ok) {
          related = true;
          break;
        }
      }
      EXPECT_EQ(related, c1 == c2);
    }
}

TEST(Aggregate, TupleCapIsEnforced) {
  auto solver = default_solver();
  int m = 6;
  auto phi = natural_phi(m, sym_gens(m));
  ColoredString x({0, 1, 2, 3, 4, 5}, 6);
  std::vector<Certificate> certs{local_certificate(phi, {0, 1, 2}, x, solver)};
  FirstChooser ch;
  AggregateParams p;
  p.tuple_cap = 10;
  EXPECT_THROW(aggregate_certificates(phi, x, certs, ch, solver, p), ResourceError);
}
