// Brute-force reference implementations used only by tests.
#ifndef GISO_TESTS_ORACLES_HPP
#define GISO_TESTS_ORACLES_HPP

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "giso/perm.hpp"
#include "giso/relstruct.hpp"

namespace oracle {

using giso::GenSet;
using giso::Permutation;

inline Permutation random_perm(int n, std::mt19937_64& rng) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  std::shuffle(v.begin(), v.end(), rng);
  return Permutation(v);
}

inline GenSet random_gens(int n, int count, std::mt19937_64& rng) {
  GenSet g(n);
  for (int i = 0; i < count; ++i) g.gens.push_back(random_perm(n, rng));
  return g;
}

// Closure of the generators under products, by breadth-first search.
inline std::set<Permutation> closure(const GenSet& g, std::size_t cap = 2000000) {
  std::set<Permutation> seen{Permutation(g.degree)};
  std::vector<Permutation> frontier{Permutation(g.degree)};
  while (!frontier.empty()) {
    std::vector<Permutation> next;
    for (const auto& p : frontier)
      for (const auto& s : g.gens) {
        Permutation q = p * s;
        if (seen.insert(q).second) next.push_back(q);
        if (seen.size() > cap) return seen;
      }
    frontier = std::move(next);
  }
  return seen;
}

inline std::vector<Permutation> all_perms(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  std::vector<Permutation> out;
  do out.emplace_back(v);
  while (std::next_permutation(v.begin(), v.end()));
  return out;
}

inline std::vector<std::vector<int>> orbits_by_closure(const std::set<Permutation>& grp,
                                                       int n) {
  std::vector<std::vector<int>> out;
  std::vector<char> done(n, 0);
  for (int p = 0; p < n; ++p) {
    if (done[p]) continue;
    std::set<int> o;
    for (const auto& g : grp) o.insert(g[p]);
    for (int q : o) done[q] = 1;
    out.emplace_back(o.begin(), o.end());
  }
  return out;
}

// Every h-orbit image test: is B a block of the group?
inline bool is_block(const std::set<Permutation>& grp, const std::vector<int>& b, int n) {
  std::vector<char> in(n, 0);
  for (int p : b) in[p] = 1;
  for (const auto& g : grp) {
    int hits = 0;
    for (int p : b) hits += in[g[p]];
    if (hits != 0 && hits != static_cast<int>(b.size())) return false;
  }
  return true;
}

// Permutations sigma with desc_Y(c_Y(x^sigma)) = desc_X(c_X(x)) for all tuples.
inline std::set<Permutation> config_isos(const giso::Configuration& x,
                                         const giso::Configuration& y) {
  std::set<Permutation> out;
  int k = x.arity();
  for (const auto& s : all_perms(x.gamma_size())) {
    bool ok = true;
    for (std::size_t i = 0; ok && i < x.tuple_count(); ++i) {
      auto t = x.tuple_at(i);
      for (int j = 0; j < k; ++j) t[j] = s[t[j]];
      ok = x.palette()[x.color(i)] == y.palette()[y.color(t)];
    }
    if (ok) out.insert(s);
  }
  return out;
}

// Same for raw structures: R_i^sigma = R'_i for every i.
inline std::set<Permutation> structure_isos(const giso::RelStructure& x,
                                            const giso::RelStructure& y) {
  auto norm = [](const std::vector<giso::Tuple>& r) {
    return std::set<giso::Tuple>(r.begin(), r.end());
  };
  std::set<Permutation> out;
  if (x.relations.size() != y.relations.size()) return out;
  for (const auto& s : all_perms(x.gamma_size)) {
    bool ok = true;
    for (std::size_t r = 0; ok && r < x.relations.size(); ++r) {
      std::set<giso::Tuple> img;
      for (auto t : x.relations[r]) {
        for (auto& v : t) v = s[v];
        img.insert(t);
      }
      ok = img == norm(y.relations[r]);
    }
    if (ok) out.insert(s);
  }
  return out;
}

// Coherence straight from the definition, over every color vector.
inline bool coherent_by_definition(const giso::Configuration& c) {
  int m = c.gamma_size(), k = c.arity();
  std::vector<std::map<std::vector<int>, int>> table(c.num_colors());
  std::vector<char> seen(c.num_colors(), 0);
  for (std::size_t idx = 0; idx < c.tuple_count(); ++idx) {
    auto x = c.tuple_at(idx);
    std::map<std::vector<int>, int> counts;
    for (int z = 0; z < m; ++z) {
      std::vector<int> kvec(k);
      for (int i = 0; i < k; ++i) {
        auto y = x;
        y[i] = z;
        kvec[i] = c.color(y);
      }
      ++counts[kvec];
    }
    int col = c.color(idx);
    if (!seen[col]) seen[col] = 1, table[col] = counts;
    else if (table[col] != counts) return false;
  }
  return true;
}

// Does a refine b (every class of a inside a class of b)?
inline bool refines(const giso::Configuration& a, const giso::Configuration& b) {
  std::vector<int> map(a.num_colors(), -1);
  for (std::size_t i = 0; i < a.tuple_count(); ++i) {
    int& t = map[a.color(i)];
    if (t == -1) t = b.color(i);
    else if (t != b.color(i)) return false;
  }
  return true;
}

}  // namespace oracle

#endif
