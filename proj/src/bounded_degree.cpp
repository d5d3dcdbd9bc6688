#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "giso/errors.hpp"
#include "giso/graph.hpp"
#include "giso/group.hpp"
#include "giso/string_iso.hpp"

namespace giso {

namespace {

std::vector<std::vector<int>> adjacency(const Graph& g) {
  std::vector<std::vector<int>> adj(g.n);
  for (auto [u, v] : g.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

// The closure of `seeds` (sorted subsets) under `gens`, sorted. The string
// stabilizer only needs an invariant set of subsets holding every nonzero
// letter, so the rest of the k-subsets are left out.
std::vector<std::vector<int>> closed_subsets(std::vector<std::vector<int>> seeds,
                                             const GenSet& gens) {
  std::set<std::vector<int>> seen(seeds.begin(), seeds.end());
  std::vector<std::vector<int>> queue(seen.begin(), seen.end());
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (const auto& g : gens.gens) {
      std::vector<int> t;
      for (int v : queue[i]) t.push_back(g[v]);
      std::sort(t.begin(), t.end());
      if (seen.insert(t).second) queue.push_back(t);
    }
  return {seen.begin(), seen.end()};
}

void add_sym(GenSet& out, const std::vector<int>& pts) {
  if (pts.size() < 2) return;
  out.gens.push_back(Permutation::from_cycles(out.degree, {{pts[0], pts[1]}}));
  if (pts.size() > 2) out.gens.push_back(Permutation::from_cycles(out.degree, {pts}));
}

}  // namespace

GenSet aut_fixing_edge(const Graph& g, int p, int q, int k) {
  g.check();
  if (g.directed) throw InputError("bounded-degree pipeline needs an undirected graph");
  if (!g.has_edge(p, q)) throw InputError("{p, q} is not an edge");
  if (!g.connected()) throw InputError("bounded-degree pipeline needs a connected graph");
  auto deg = g.degrees();
  for (int d : deg)
    if (d > k) throw InputError("vertex degree exceeds the bound");
  int n = g.n;
  auto adj = adjacency(g);
  // Distance to {p, q}.
  std::vector<int> dist(n, -1);
  std::vector<int> queue{p, q};
  dist[p] = dist[q] = 0;
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (int w : adj[queue[i]])
      if (dist[w] < 0) {
        dist[w] = dist[queue[i]] + 1;
        queue.push_back(w);
      }
  int depth = *std::max_element(dist.begin(), dist.end());
  GenSet a(n);
  a.gens.push_back(Permutation::from_cycles(n, {{p, q}}));
  // Gamma_r: vertices at distance <= r, edges with an end at distance < r.
  for (int r = 0; r <= depth; ++r) {
    std::vector<int> inner, fresh;
    for (int v = 0; v < n; ++v) {
      if (dist[v] <= r) inner.push_back(v);
      else if (dist[v] == r + 1) fresh.push_back(v);
    }
    // K_i: neighbourhoods in Gamma_r of the new vertices; K': new edges
    // between vertices at distance exactly r.
    std::map<std::vector<int>, std::vector<int>> by_nbhd;
    for (int w : fresh) {
      std::vector<int> s;
      for (int u : adj[w])
        if (dist[u] == r) s.push_back(u);
      by_nbhd[s].push_back(w);
    }
    std::vector<std::vector<int>> seeds;
    for (int v : inner) seeds.push_back({v});
    for (const auto& [nb, ws] : by_nbhd) seeds.push_back(nb);
    for (auto [u, v] : g.edges)
      if (dist[u] == r && dist[v] == r && r > 0) seeds.push_back({std::min(u, v), std::max(u, v)});
    auto subsets = closed_subsets(seeds, a);
    std::map<std::vector<int>, int> index;
    for (std::size_t i = 0; i < subsets.size(); ++i) index[subsets[i]] = static_cast<int>(i);
    std::vector<int> letters(subsets.size(), 0);
    int top = 0;
    for (const auto& [s, ws] : by_nbhd) {
      letters[index.at(s)] += 2 * static_cast<int>(ws.size());
      top = std::max(top, letters[index.at(s)]);
    }
    for (auto [u, v] : g.edges)
      if (dist[u] == r && dist[v] == r && !(r == 0)) {
        std::vector<int> s{std::min(u, v), std::max(u, v)};
        letters[index.at(s)] += 1;
        top = std::max(top, letters[index.at(s)]);
      }
    ColoredString x(letters, top + 1);
    // The action of Aut_e(Gamma_r) on the subsets.
    GenSet on_k(static_cast<int>(subsets.size()));
    for (const auto& gen : a.gens) {
      std::vector<int> img(subsets.size());
      for (std::size_t i = 0; i < subsets.size(); ++i) {
        std::vector<int> s;
        for (int v : subsets[i]) s.push_back(gen[v]);
        std::sort(s.begin(), s.end());
        img[i] = index.at(s);
      }
      on_k.gens.emplace_back(img);
    }
    IsoCoset stab = luks_iso(on_k, x, x, k);
    GenSet next(n);
    // Image of pi_r, each generator extended to the new vertices.
    for (const auto& s : stab.group.generators().gens) {
      std::vector<int> img(n);
      std::iota(img.begin(), img.end(), 0);
      for (int v : inner) img[v] = subsets[s[index.at({v})]][0];
      for (const auto& [nb, ws] : by_nbhd) {
        std::vector<int> t;
        for (int v : nb) t.push_back(img[v]);
        std::sort(t.begin(), t.end());
        const auto& target = by_nbhd.at(t);
        for (std::size_t i = 0; i < ws.size(); ++i) img[ws[i]] = target[i];
      }
      next.gens.emplace_back(img);
    }
    // Kernel of pi_r: twins among the new vertices.
    for (const auto& [nb, ws] : by_nbhd) add_sym(next, ws);
    a = next;
  }
  for (const auto& gen : a.gens)
    for (auto [u, v] : g.edges)
      if (!g.has_edge(gen[u], gen[v])) throw InternalError("layered automorphism is not an automorphism");
  return a;
}

Graph edge_gadget(const Graph& g1, std::pair<int, int> e1, const Graph& g2,
                  std::pair<int, int> e2) {
  int n = g1.n;
  Graph g;
  g.n = 2 * n + 2;
  int p = 2 * n, q = 2 * n + 1;
  auto same = [](std::pair<int, int> a, std::pair<int, int> b) {
    return (a.first == b.first && a.second == b.second) ||
           (a.first == b.second && a.second == b.first);
  };
  for (auto e : g1.edges)
    if (!same(e, e1)) g.edges.push_back(e);
  for (auto e : g2.edges)
    if (!same(e, e2)) g.edges.emplace_back(e.first + n, e.second + n);
  g.edges.emplace_back(e1.first, p);
  g.edges.emplace_back(p, e1.second);
  g.edges.emplace_back(e2.first + n, q);
  g.edges.emplace_back(q, e2.second + n);
  g.edges.emplace_back(p, q);
  return g;
}

BoundedDegreeResult bounded_degree_pipeline(const Graph& g1, const Graph& g2, int k) {
  if (k < 3) throw InputError("degree bound must be at least 3");
  g1.check();
  g2.check();
  if (!g1.connected() || !g2.connected()) throw InputError("graphs must be connected");
  for (const Graph* g : {&g1, &g2})
    for (int d : g->degrees())
      if (d > k) throw InputError("vertex degree exceeds the bound");
  int n = g1.n;
  BoundedDegreeResult out;
  if (g1.n != g2.n || g1.edges.size() != g2.edges.size()) return out;
  if (g1.edges.empty()) {
    // Connected without edges: at most one vertex.
    out.iso = IsoCoset::of(PermGroup::trivial(n), Permutation(n));
    return out;
  }
  auto e1 = g1.edges[0];
  int p = 2 * n, q = 2 * n + 1;
  auto restrict = [&](const Permutation& s, int shift) {
    std::vector<int> img(n);
    for (int v = 0; v < n; ++v) img[v] = s[v] - shift;
    return Permutation(img);
  };
  // Iso(g1, g2) is the union over e2 of Aut_{e1}(g1) sigma_{e2}.
  std::optional<PermGroup> aut_e1;
  CosetUnion u;
  for (auto e2 : g2.edges) {
    Graph gad = edge_gadget(g1, e1, g2, e2);
    GenSet a = aut_fixing_edge(gad, p, q, k);
    GadgetReport rpt;
    rpt.e2 = e2;
    for (const auto& s : a.gens) (s[p] == p ? rpt.fixing : rpt.transposing)++;
    PermGroup grp(a);
    rpt.order = grp.order();
    out.gadgets.push_back(rpt);
    if (!aut_e1) {
      GenSet sub = rpt.transposing == 0
                       ? a
                       : subgroup_by_test(grp, [&](const Permutation& s) { return s[p] == p; }, 2);
      GenSet gens(n);
      for (const auto& s : sub.gens) {
        Permutation r = restrict(s, 0);
        if (!r.is_identity()) gens.gens.push_back(r);
      }
      aut_e1 = PermGroup(gens);
    }
    if (rpt.transposing == 0) continue;
    for (const auto& s : a.gens)
      if (s[p] == q) {
        u.add(IsoCoset::of(*aut_e1, restrict(s, n)));
        break;
      }
  }
  out.iso = u.empty() ? IsoCoset::none() : u.result();
  return out;
}

}  // namespace giso
