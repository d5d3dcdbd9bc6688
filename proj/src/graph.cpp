#include "giso/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

#include "giso/errors.hpp"

namespace giso {

void Graph::check() const {
  if (n < 0) throw InputError("negative vertex count");
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) throw InputError("edge endpoint out of range");
    if (u == v) throw InputError("self-loops are not supported");
    auto e = directed ? std::make_pair(u, v) : std::make_pair(std::min(u, v), std::max(u, v));
    if (!seen.insert(e).second) throw InputError("repeated edge");
  }
}

bool Graph::has_edge(int u, int v) const {
  for (auto [a, b] : edges)
    if ((a == u && b == v) || (!directed && a == v && b == u)) return true;
  return false;
}

std::vector<int> Graph::degrees() const {
  std::vector<int> d(n, 0);
  for (auto [u, v] : edges) {
    ++d[u];
    ++d[v];
  }
  return d;
}

bool Graph::connected() const {
  if (n == 0) return true;
  std::vector<std::vector<int>> adj(n);
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        stack.push_back(v);
      }
  }
  return count == n;
}

Graph Graph::relabeled(const Permutation& p) const {
  Graph g = *this;
  for (auto& [u, v] : g.edges) {
    u = p[u];
    v = p[v];
  }
  return g;
}

Graph read_graph(std::istream& in) {
  std::string line;
  Graph g;
  long long m = -1;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (m < 0) {
      std::string flag;
      if (!(ls >> g.n >> m)) throw InputError("graph header must be \"n m [directed]\"");
      if (ls >> flag) {
        if (flag != "directed") throw InputError("unknown graph flag: " + flag);
        g.directed = true;
      }
      continue;
    }
    int u, v;
    if (!(ls >> u >> v)) throw InputError("bad edge line: " + line);
    g.edges.emplace_back(u, v);
  }
  if (m < 0) throw InputError("empty graph file");
  if (static_cast<long long>(g.edges.size()) != m)
    throw InputError("edge count differs from the header");
  g.check();
  return g;
}

Graph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_graph(in);
}

void write_graph(std::ostream& out, const Graph& g) {
  out << g.n << ' ' << g.edges.size() << (g.directed ? " directed" : "") << '\n';
  for (auto [u, v] : g.edges) out << u << ' ' << v << '\n';
}

namespace {

std::vector<std::pair<int, int>> omega_of(int n, bool directed) {
  std::vector<std::pair<int, int>> om;
  for (int u = 0; u < n; ++u)
    for (int v = directed ? 0 : u + 1; v < n; ++v)
      if (u != v) om.emplace_back(u, v);
  return om;
}

int pair_index(const GraphStrings& s, int u, int v) {
  int n = s.vertices;
  if (s.directed) return u * (n - 1) + (v < u ? v : v - 1);
  if (u > v) std::swap(u, v);
  // Pairs (a, b), a < u, come first: sum of n-1-a.
  return u * (2 * n - u - 1) / 2 + (v - u - 1);
}

ColoredString edge_string(const GraphStrings& s, const Graph& g) {
  std::vector<int> l(s.omega.size(), 0);
  for (auto [u, v] : g.edges) l[pair_index(s, u, v)] = 1;
  return ColoredString(l, 2);
}

}  // namespace

GraphStrings graph_to_string(const Graph& g1, const Graph& g2) {
  g1.check();
  g2.check();
  if (g1.n != g2.n) throw InputError("vertex counts differ");
  if (g1.directed != g2.directed) throw InputError("one graph is directed, the other is not");
  GraphStrings s;
  s.vertices = g1.n;
  s.directed = g1.directed;
  s.omega = omega_of(g1.n, g1.directed);
  s.gens = GenSet(static_cast<int>(s.omega.size()));
  int n = g1.n;
  if (n >= 2) {
    std::vector<int> cyc(n);
    std::iota(cyc.begin(), cyc.end(), 0);
    for (const auto& p :
         {Permutation::from_cycles(n, {{0, 1}}), Permutation::from_cycles(n, {cyc})}) {
      auto q = pair_action(s, p);
      if (!q.is_identity()) s.gens.gens.push_back(q);
    }
  }
  s.x = edge_string(s, g1);
  s.y = edge_string(s, g2);
  return s;
}

Permutation pair_action(const GraphStrings& s, const Permutation& sigma) {
  std::vector<int> img(s.omega.size());
  for (std::size_t i = 0; i < s.omega.size(); ++i)
    img[i] = pair_index(s, sigma[s.omega[i].first], sigma[s.omega[i].second]);
  return Permutation(img);
}

Permutation vertex_lift(const GraphStrings& s, const Permutation& tau) {
  int n = s.vertices;
  if (n < (s.directed ? 2 : 3)) {
    if (n <= 1 || s.directed || tau.is_identity()) return Permutation(n);
    throw InputError("vertex lift is ambiguous on two vertices");
  }
  std::vector<int> img(n, -1);
  for (int v = 0; v < n; ++v) {
    if (s.directed) {
      // (v, w) goes to (v', w'): the first coordinate is v's image.
      int w = v == 0 ? 1 : 0;
      img[v] = s.omega[tau[pair_index(s, v, w)]].first;
      continue;
    }
    int a = v == 0 ? 1 : 0, b = v <= 1 ? 2 : 1;
    auto p = s.omega[tau[pair_index(s, v, a)]];
    auto q = s.omega[tau[pair_index(s, v, b)]];
    img[v] = (p.first == q.first || p.first == q.second) ? p.first : p.second;
  }
  Permutation sigma(img);
  if (pair_action(s, sigma) != tau) throw InputError("permutation of Omega is not induced");
  return sigma;
}

GraphIsoResult graph_iso(const Graph& g1, const Graph& g2, const IsoConfig& config) {
  GraphIsoResult r;
  if (g1.n != g2.n || g1.directed != g2.directed || g1.edges.size() != g2.edges.size()) {
    g1.check();
    g2.check();
    return r;
  }
  auto s = graph_to_string(g1, g2);
  int n = g1.n;
  if (s.omega.empty()) {
    r.isomorphic = true;
    r.iso = Permutation(n);
    r.aut_order = n == 2 ? 2 : 1;
    return r;
  }
  auto c = main_string_iso(s.gens, s.x, s.y, config, &r.budget);
  if (c.empty) return r;
  r.isomorphic = true;
  if (!s.directed && n == 2) {
    r.iso = Permutation(2);
    r.aut_order = 2;
    return r;
  }
  r.iso = vertex_lift(s, c.rep);
  r.aut_order = c.group.order();
  return r;
}

namespace {

struct Adj {
  int n;
  bool directed;
  std::vector<std::vector<char>> a;
  explicit Adj(const Graph& g) : n(g.n), directed(g.directed), a(g.n, std::vector<char>(g.n, 0)) {
    for (auto [u, v] : g.edges) {
      a[u][v] = 1;
      if (!directed) a[v][u] = 1;
    }
  }
};

// Extends img on vertices 0..depth-1 consistently with adjacency.
template <class F>
bool search(const Adj& x, const Adj& y, std::vector<int>& img, std::vector<char>& used,
            int depth, const std::vector<int>& dx, const std::vector<int>& dy, F& emit) {
  int n = x.n;
  if (depth == n) return emit(img);
  for (int c = 0; c < n; ++c) {
    if (used[c] || dx[depth] != dy[c]) continue;
    bool ok = true;
    for (int u = 0; u < depth && ok; ++u)
      ok = x.a[u][depth] == y.a[img[u]][c] && x.a[depth][u] == y.a[c][img[u]];
    if (!ok) continue;
    img[depth] = c;
    used[c] = 1;
    bool go = search(x, y, img, used, depth + 1, dx, dy, emit);
    used[c] = 0;
    if (!go) return false;
  }
  return true;
}

template <class F>
void enumerate_isos(const Graph& g1, const Graph& g2, F emit) {
  if (g1.n != g2.n || g1.directed != g2.directed || g1.edges.size() != g2.edges.size()) return;
  Adj x(g1), y(g2);
  auto d1 = g1.degrees(), d2 = g2.degrees();
  std::vector<int> img(g1.n, -1);
  std::vector<char> used(g1.n, 0);
  search(x, y, img, used, 0, d1, d2, emit);
}

}  // namespace

std::vector<Permutation> brute_force_iso(const Graph& g1, const Graph& g2, int max_n,
                                         std::size_t limit) {
  g1.check();
  g2.check();
  if (g1.n > max_n) throw InputError("brute force limited to " + std::to_string(max_n) + " vertices");
  std::vector<Permutation> out;
  auto emit = [&](const std::vector<int>& img) {
    out.emplace_back(img);
    return out.size() < limit;
  };
  enumerate_isos(g1, g2, emit);
  return out;
}

bool brute_force_isomorphic(const Graph& g1, const Graph& g2) {
  if (g1.n > 16) throw InputError("oracle limited to 16 vertices");
  bool found = false;
  auto emit = [&](const std::vector<int>&) {
    found = true;
    return false;
  };
  enumerate_isos(g1, g2, emit);
  return found;
}

std::vector<Graph> all_graphs(int n, bool connected_only) {
  if (n < 0 || n > 7) throw InputError("graph enumeration supports n <= 7");
  auto om = omega_of(n, false);
  int e = static_cast<int>(om.size());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  // Pair images under every vertex permutation.
  std::vector<std::vector<int>> act;
  GraphStrings s;
  s.vertices = n;
  s.omega = om;
  do {
    std::vector<int> img(e);
    for (int i = 0; i < e; ++i) img[i] = pair_index(s, perm[om[i].first], perm[om[i].second]);
    act.push_back(img);
  } while (std::next_permutation(perm.begin(), perm.end()));
  auto canon = [&](std::uint32_t mask) {
    std::uint32_t best = UINT32_MAX;
    for (const auto& img : act) {
      std::uint32_t m2 = 0;
      for (int i = 0; i < e; ++i)
        if (mask >> i & 1) m2 |= 1u << img[i];
      best = std::min(best, m2);
    }
    return best;
  };
  std::set<std::uint32_t> level{0}, all{0};
  for (int k = 0; k < e; ++k) {
    std::set<std::uint32_t> next;
    for (auto mask : level)
      for (int i = 0; i < e; ++i)
        if (!(mask >> i & 1)) next.insert(canon(mask | 1u << i));
    all.insert(next.begin(), next.end());
    level = std::move(next);
  }
  std::vector<Graph> out;
  for (auto mask : all) {
    Graph g;
    g.n = n;
    for (int i = 0; i < e; ++i)
      if (mask >> i & 1) g.edges.push_back(om[i]);
    if (!connected_only || g.connected()) out.push_back(std::move(g));
  }
  return out;
}

Graph random_graph(int n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  Graph g;
  g.n = n;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin(rng)) g.edges.emplace_back(u, v);
  return g;
}

}  // namespace giso
