#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "giso/errors.hpp"
#include "giso/group.hpp"
#include "oracles.hpp"

namespace giso {
namespace {

Permutation cyc(int n, std::vector<std::vector<int>> c) {
  return Permutation::from_cycles(n, c);
}

TEST(PermutationTest, RightActionProduct) {
  Permutation a = cyc(3, {{0, 1}});
  Permutation b = cyc(3, {{1, 2}});
  // 0^a = 1, 1^b = 2.
  EXPECT_EQ((a * b)[0], 2);
  EXPECT_TRUE((a * a.inverse()).is_identity());
  EXPECT_EQ(cyc(5, {{0, 1, 2}, {3, 4}}).sign(), -1);
  EXPECT_EQ(cyc(5, {{0, 1, 2}}).pow(3), Permutation(5));
}

TEST(PermutationTest, Parsing) {
  EXPECT_EQ(parse_permutation("(0 1 2)(3 4)", 5), cyc(5, {{0, 1, 2}, {3, 4}}));
  EXPECT_EQ(parse_permutation("1 2 0 4 3", 5), cyc(5, {{0, 1, 2}, {3, 4}}));
  EXPECT_THROW(parse_permutation("1 1 0", 3), InputError);
  std::istringstream in("# sym5\ndegree 5\n(0 1)\n1 2 3 4 0  # cycle\n");
  GenSet g = read_generators(in);
  EXPECT_EQ(g.degree, 5);
  EXPECT_EQ(PermGroup(g).order(), 120);
}

TEST(SchreierSimsTest, TrivialGroup) {
  StabilizerChain c(GenSet(5));
  EXPECT_EQ(c.order(), 1);
  for (int s : c.transversal_sizes()) EXPECT_EQ(s, 1);
  EXPECT_EQ(c.sift(Permutation(5)).level, c.levels());
}

TEST(SchreierSimsTest, Symmetric5) {
  StabilizerChain c(GenSet(5, {cyc(5, {{0, 1}}), cyc(5, {{0, 1, 2, 3, 4}})}));
  EXPECT_EQ(c.order(), 120);
}

TEST(SchreierSimsTest, SiftOutsideGroup) {
  StabilizerChain c(GenSet(3, {cyc(3, {{0, 1, 2}})}));
  auto s = c.sift(cyc(3, {{0, 1}}));
  // C_0 covers the whole orbit of 0, so the failure shows at level 1.
  EXPECT_LT(s.level, c.levels());
  EXPECT_FALSE(s.residue.is_identity());
}

TEST(SchreierSimsTest, OrderAndMembershipAgainstClosure) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 4 + trial % 5;
    GenSet g = oracle::random_gens(n, 1 + trial % 3, rng);
    auto cl = oracle::closure(g);
    StabilizerChain c(g);
    ASSERT_EQ(c.order(), cl.size());
    for (int w = 0; w < 30; ++w) {
      Permutation p = oracle::random_perm(n, rng);
      EXPECT_EQ(c.contains(p), cl.count(p) == 1);
    }
    std::size_t count = 0;
    c.for_each_element([&](const Permutation& e) {
      EXPECT_TRUE(cl.count(e));
      ++count;
      return true;
    });
    EXPECT_EQ(count, cl.size());
  }
}

TEST(SchreierSimsTest, WordsInSmallGroupsOfS8) {
  std::mt19937_64 rng(5);
  // Generators chosen inside a Young subgroup so the group stays small.
  for (int trial = 0; trial < 10; ++trial) {
    GenSet g(8);
    for (int i = 0; i < 2; ++i) {
      Permutation a = oracle::random_perm(4, rng);
      std::vector<int> v(8);
      for (int j = 0; j < 4; ++j) v[j] = a[j];
      for (int j = 4; j < 8; ++j) v[j] = j;
      if (i == 1) std::swap(v[4], v[5]);
      g.gens.emplace_back(v);
    }
    auto cl = oracle::closure(g);
    StabilizerChain c(g);
    for (int w = 0; w < 20; ++w) {
      Permutation word(8);
      for (int l = 0; l < 6; ++l) word = word * g.gens[rng() % 2];
      EXPECT_TRUE(c.contains(word));
      Permutation p = oracle::random_perm(8, rng);
      EXPECT_EQ(c.contains(p), cl.count(p) == 1);
    }
  }
}

TEST(SchreierSimsTest, IncrementalExtension) {
  StabilizerChain c(GenSet(6));
  EXPECT_TRUE(c.extend(cyc(6, {{0, 1, 2, 3, 4, 5}})));
  EXPECT_EQ(c.order(), 6);
  EXPECT_FALSE(c.extend(cyc(6, {{0, 2, 4}, {1, 3, 5}})));
  EXPECT_TRUE(c.extend(cyc(6, {{0, 1}})));
  EXPECT_EQ(c.order(), 720);
}

TEST(SchreierSimsTest, FirstLevelSchreierGenerators) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    GenSet g = oracle::random_gens(6, 2, rng);
    PermGroup grp(g);
    // A*A*A^{-1} intersected with G_1 generates G_1.
    GenSet h(6);
    for (const auto& a : g.gens)
      for (const auto& b : g.gens)
        for (const auto& c : g.gens) {
          for (const auto& cc : {c, c.inverse()}) {
            Permutation p = a * b * cc;
            if (p[0] == 0) h.gens.push_back(p);
          }
        }
    auto stab = pointwise_stabilizer(grp, {0});
    PermGroup hs(h);
    EXPECT_LE(hs.order(), PermGroup(stab).order());
  }
}

TEST(OrbitsTest, Basics) {
  EXPECT_EQ(orbits(GenSet(4)).size(), 4u);
  auto o = orbits(GenSet(5, {cyc(5, {{0, 1, 2}, {3, 4}})}));
  ASSERT_EQ(o.size(), 2u);
  EXPECT_EQ(o[0], (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(o[1], (std::vector<int>{3, 4}));
}

TEST(OrbitsTest, AgreeWithClosure) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    GenSet g(9);
    for (int i = 0; i < 2; ++i) {
      // Sparse generators so that orbits are nontrivial.
      Permutation p(9);
      for (int s = 0; s < 2; ++s) {
        int a = rng() % 9, b = rng() % 9;
        if (a != b) p = p * cyc(9, {{a, b}});
      }
      g.gens.push_back(p);
    }
    auto cl = oracle::closure(g);
    EXPECT_EQ(orbits(g), oracle::orbits_by_closure(cl, 9));
  }
}

TEST(BlocksTest, Examples) {
  auto bs = minimal_block_system(GenSet(4, {cyc(4, {{0, 1, 2, 3}})}));
  ASSERT_TRUE(bs);
  EXPECT_EQ(bs->blocks, (std::vector<std::vector<int>>{{0, 2}, {1, 3}}));
  EXPECT_FALSE(minimal_block_system(GenSet(3, {cyc(3, {{0, 1, 2}})})));
  EXPECT_FALSE(minimal_block_system(
      GenSet(4, {cyc(4, {{0, 1}}), cyc(4, {{0, 1, 2, 3}})})));
  EXPECT_THROW(minimal_block_system(GenSet(4, {cyc(4, {{0, 1}})})), InputError);
}

TEST(BlocksTest, CellsAreBlocksAndQuotientPrimitive) {
  std::mt19937_64 rng(9);
  int checked = 0, primitive_checked = 0;
  for (int trial = 0; trial < 200 && checked < 40; ++trial) {
    int n = 8;
    // Transitive groups with blocks: wreath-style generators.
    GenSet g(n);
    g.gens.push_back(cyc(n, {{0, 1, 2, 3, 4, 5, 6, 7}}));
    Permutation p = oracle::random_perm(n, rng);
    g.gens.push_back(p);
    if (PermGroup(g).order() > 5000 && primitive_checked >= 3) continue;
    auto cl = oracle::closure(g);
    auto bs = minimal_block_system(g);
    if (!bs) {
      if (++primitive_checked > 3) continue;
      // Primitive: no nontrivial subset containing 0 is a block.
      for (int mask = 0; mask < (1 << n); ++mask) {
        if (!(mask & 1)) continue;
        int sz = __builtin_popcount(mask);
        if (sz == 1 || sz == n) continue;
        std::vector<int> b;
        for (int i = 0; i < n; ++i)
          if (mask >> i & 1) b.push_back(i);
        EXPECT_FALSE(oracle::is_block(cl, b, n));
      }
      continue;
    }
    ++checked;
    EXPECT_TRUE(is_block_system(g, *bs));
    for (const auto& b : bs->blocks) EXPECT_TRUE(oracle::is_block(cl, b, n));
    EXPECT_FALSE(minimal_block_system(action_on_blocks(g, *bs)));
  }
  EXPECT_GT(checked, 0);
}

TEST(StabilizerTest, PointwiseExamples) {
  PermGroup c3(GenSet(3, {cyc(3, {{0, 1, 2}})}));
  EXPECT_EQ(PermGroup(pointwise_stabilizer(c3, {})).order(), 3);
  EXPECT_EQ(PermGroup(pointwise_stabilizer(c3, {0})).order(), 1);
}

TEST(StabilizerTest, OrbitStabilizer) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 5 + trial % 4;
    GenSet g = oracle::random_gens(n, 1 + trial % 2, rng);
    PermGroup grp(g);
    auto cl = oracle::closure(g);
    int pt = trial % n;
    std::set<int> orb;
    for (const auto& e : cl) orb.insert(e[pt]);
    GenSet st = pointwise_stabilizer(grp, {pt, (pt + 1) % n});
    for (const auto& s : st.gens) {
      EXPECT_EQ(s[pt], pt);
      EXPECT_EQ(s[(pt + 1) % n], (pt + 1) % n);
    }
    EXPECT_EQ(PermGroup(pointwise_stabilizer(grp, {pt})).order() * orb.size(),
              cl.size());
  }
}

TEST(SubgroupByTestTest, Examples) {
  PermGroup s4(GenSet(4, {cyc(4, {{0, 1}}), cyc(4, {{0, 1, 2, 3}})}));
  EXPECT_EQ(PermGroup(subgroup_by_test(s4, [](const Permutation&) { return true; }, 1))
                .order(),
            24);
  EXPECT_EQ(PermGroup(subgroup_by_test(
                          s4, [](const Permutation& p) { return p.sign() == 1; }, 2))
                .order(),
            12);
  auto setwise = [](const Permutation& p) { return (p[0] <= 1) && (p[1] <= 1); };
  EXPECT_EQ(PermGroup(subgroup_by_test(s4, setwise, 6)).order(), 4);
  EXPECT_THROW(subgroup_by_test(s4, setwise, 3), InputError);
}

TEST(SetwiseTest, Examples) {
  PermGroup s3(GenSet(3, {cyc(3, {{0, 1}}), cyc(3, {{0, 1, 2}})}));
  EXPECT_EQ(PermGroup(setwise_stabilizer_smallk(s3, {0, 1})).order(), 2);
  EXPECT_EQ(PermGroup(setwise_stabilizer_smallk(s3, {0, 1, 2})).order(), 6);
  PermGroup s14 = PermGroup::symmetric({0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13}, 14);
  EXPECT_THROW(setwise_stabilizer_smallk(s14, {0, 1, 2, 3, 4, 5, 6}), InputError);
}

TEST(SetwiseTest, LagrangeAndClosure) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 6;
    GenSet g = oracle::random_gens(n, 1 + trial % 2, rng);
    PermGroup grp(g);
    std::vector<int> t{0, 2, 3};
    PermGroup st(setwise_stabilizer_smallk(grp, t));
    EXPECT_EQ(grp.order() % st.order(), 0);
    if (trial < 20) {
      std::size_t cnt = 0;
      for (const auto& e : oracle::closure(g)) {
        std::set<int> im{e[0], e[2], e[3]};
        if (im == std::set<int>{0, 2, 3}) ++cnt;
      }
      EXPECT_EQ(st.order(), cnt);
    }
  }
}

TEST(HomomorphismTest, BlockAction) {
  GenSet g(4, {cyc(4, {{0, 1}}), cyc(4, {{2, 3}})});
  GenSet img(2, {Permutation(2), Permutation(2)});
  EXPECT_EQ(PermGroup(preimage_of_subgroup(g, img, GenSet(2))).order(), 4);
}

TEST(HomomorphismTest, PreimageOrders) {
  std::mt19937_64 rng(12);
  GenSet s4(4, {cyc(4, {{0, 1}}), cyc(4, {{0, 1, 2, 3}})});
  // Action of S4 on the three partitions of {0,1,2,3} into pairs.
  auto act = [](const Permutation& p) {
    std::vector<std::array<int, 2>> parts{{0, 1}, {0, 2}, {0, 3}};
    auto idx = [&](int a, int b) {
      int other = a == 0 ? b : (b == 0 ? a : -1);
      if (other < 0) {
        for (int x = 1; x < 4; ++x)
          if (x != a && x != b) other = x;
      }
      return other - 1;
    };
    std::vector<int> v(3);
    for (int i = 0; i < 3; ++i) v[i] = idx(p[parts[i][0]], p[parts[i][1]]);
    return Permutation(v);
  };
  GenSet img(3);
  for (const auto& g : s4.gens) img.gens.push_back(act(g));
  Homomorphism h(s4, img);
  EXPECT_EQ(PermGroup(h.kernel()).order(), 4);
  EXPECT_EQ(h.image().order(), 6);
  for (int trial = 0; trial < 20; ++trial) {
    Permutation q = oracle::random_perm(3, rng);
    GenSet target(3, {q});
    GenSet pre = h.preimage(target);
    // Oracle: count elements of S4 mapping into <q>.
    auto tq = oracle::closure(target);
    std::size_t cnt = 0;
    for (const auto& e : oracle::all_perms(4))
      if (tq.count(act(e))) ++cnt;
    EXPECT_EQ(PermGroup(pre).order(), cnt);
    Permutation l = h.lift(q);
    EXPECT_EQ(act(l), q);
  }
  GenSet bad(3, {cyc(3, {{0, 1}})});
  GenSet a4(4, {cyc(4, {{0, 1, 2}}), cyc(4, {{1, 2, 3}})});
  GenSet a4img(3);
  for (const auto& g : a4.gens) a4img.gens.push_back(act(g));
  Homomorphism ha(a4, a4img);
  EXPECT_THROW(ha.preimage(bad), InputError);
}

}  // namespace
}  // namespace giso
