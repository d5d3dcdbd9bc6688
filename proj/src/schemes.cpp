#include "giso/schemes.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <set>

#include "giso/errors.hpp"
#include "giso/wl.hpp"

namespace giso {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a), b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

std::vector<std::vector<int>> cells(UnionFind& uf, const std::vector<int>& points) {
  std::map<int, std::vector<int>> by_root;
  for (int p : points) by_root[uf.find(p)].push_back(p);
  std::vector<std::vector<int>> out;
  for (auto& [r, v] : by_root) out.push_back(std::move(v));
  std::sort(out.begin(), out.end());
  return out;
}

void require_classical(const Configuration& c) {
  if (c.arity() != 2) throw InputError("classical configuration required (arity 2)");
}

int col(const Configuration& c, int x, int y) {
  return c.color(static_cast<std::size_t>(x) * c.gamma_size() + y);
}

void fail(IdentifyFailure* why, std::string reason,
          std::optional<std::pair<int, int>> w = std::nullopt) {
  if (why) *why = {std::move(reason), w};
}

}  // namespace

std::vector<std::vector<int>> color_components(const Configuration& c, int color) {
  require_classical(c);
  int n = c.gamma_size();
  UnionFind uf(n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (col(c, x, y) == color) uf.unite(x, y);
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  return cells(uf, all);
}

ClassicalSummary classify_classical(const Configuration& c) {
  require_classical(c);
  if (!check_coherent(c).is_coherent) throw InputError("configuration is not coherent");
  int n = c.gamma_size();
  ClassicalSummary s;
  std::map<int, std::vector<int>> by_color;
  for (int v = 0; v < n; ++v) by_color[col(c, v, v)].push_back(v);
  for (auto& [k, v] : by_color) {
    s.vertex_colors.push_back(k);
    s.vertex_classes.push_back(v);
  }
  s.homogeneous = s.vertex_classes.size() <= 1;
  std::set<int> edge;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (x != y) edge.insert(col(c, x, y));
  s.edge_colors.assign(edge.begin(), edge.end());
  bool connected = true;
  for (int r : s.edge_colors) {
    ColorGraph g;
    g.color = r;
    g.components = color_components(c, r);
    std::vector<int> deg(n, 0);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) deg[x] += col(c, x, y) == r;
    if (std::all_of(deg.begin(), deg.end(), [&](int d) { return d == deg[0]; }))
      g.out_degree = deg[0];
    connected = connected && g.components.size() == 1;
    s.color_graphs.push_back(std::move(g));
  }
  s.primitive = s.homogeneous && connected;
  s.trivial_clique = s.homogeneous && s.edge_colors.size() <= 1;
  s.uniprimitive = s.primitive && !s.trivial_clique;
  return s;
}

std::vector<std::vector<int>> k_subsets(int m, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > m) return out;
  std::vector<int> s(k);
  std::iota(s.begin(), s.end(), 0);
  while (true) {
    out.push_back(s);
    int i = k - 1;
    while (i >= 0 && s[i] == m - k + i) --i;
    if (i < 0) break;
    ++s[i];
    for (int j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
  }
  return out;
}

BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Configuration johnson_scheme(int m, int s) {
  if (s < 2 || m < 2 * s + 1) throw InputError("Johnson scheme needs s >= 2 and m >= 2s+1");
  auto pts = k_subsets(m, s);
  int n = static_cast<int>(pts.size());
  std::vector<int> colors(dense_size(n, 2));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      std::vector<int> common;
      std::set_intersection(pts[a].begin(), pts[a].end(), pts[b].begin(), pts[b].end(),
                            std::back_inserter(common));
      colors[static_cast<std::size_t>(a) * n + b] = s - static_cast<int>(common.size());
    }
  return Configuration::from_colors(n, 2, colors);
}

namespace {

using Bits = std::vector<std::uint64_t>;

// Lambda and iota from one choice of the two orbitals (upsilon, delta).
std::optional<JohnsonId> finish_johnson(const Configuration& c, JohnsonId id,
                                        bool injective_colors, int m_claim, int s_claim,
                                        IdentifyFailure* why);

std::optional<JohnsonId> johnson_from(const Configuration& c, int upsilon, int delta,
                                      bool injective_colors, int m_claim, int s_claim,
                                      IdentifyFailure* why) {
  int n = c.gamma_size();
  std::size_t words = (n + 63) / 64;
  std::vector<Bits> delta_nbrs(n, Bits(words, 0));
  for (int z = 0; z < n; ++z)
    for (int r = 0; r < n; ++r)
      if (col(c, z, r) == delta) delta_nbrs[z][r / 64] |= std::uint64_t(1) << (r % 64);

  JohnsonId id;
  id.upsilon = upsilon;
  id.delta = delta;
  std::map<std::vector<int>, int> index;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (x == y || col(c, x, y) != upsilon) continue;
      Bits covered(words, 0);
      for (int z = 0; z < n; ++z)
        if (col(c, x, z) != delta && col(c, y, z) == delta)
          for (std::size_t w = 0; w < words; ++w) covered[w] |= delta_nbrs[z][w];
      std::vector<int> cset;
      for (int r = 0; r < n; ++r)
        if (!(covered[r / 64] >> (r % 64) & 1)) cset.push_back(r);
      if (cset.empty()) {
        fail(why, "empty set C(x,y)", std::make_pair(x, y));
        return std::nullopt;
      }
      if (index.emplace(cset, static_cast<int>(id.lambda.size())).second) {
        id.lambda.push_back(std::move(cset));
        if (static_cast<int>(id.lambda.size()) > n) {
          fail(why, "too many candidate elements of Lambda");
          return std::nullopt;
        }
      }
    }
  return finish_johnson(c, std::move(id), injective_colors, m_claim, s_claim, why);
}

// Derives iota from lambda and checks every Johnson invariant.
std::optional<JohnsonId> finish_johnson(const Configuration& c, JohnsonId id,
                                        bool injective_colors, int m_claim, int s_claim,
                                        IdentifyFailure* why) {
  int n = c.gamma_size();
  id.m = static_cast<int>(id.lambda.size());
  id.iota.assign(n, {});
  for (int i = 0; i < id.m; ++i)
    for (int p : id.lambda[i]) id.iota[p].push_back(i);
  id.s = n ? static_cast<int>(id.iota[0].size()) : 0;
  for (int p = 0; p < n; ++p)
    if (static_cast<int>(id.iota[p].size()) != id.s || id.s == 0) {
      fail(why, "images of points have different sizes", std::make_pair(0, p));
      return std::nullopt;
    }
  if (binomial(id.m, id.s) != n) {
    fail(why, "point count is not C(m,s)");
    return std::nullopt;
  }
  std::map<std::vector<int>, int> seen;
  for (int p = 0; p < n; ++p) {
    auto [it, fresh] = seen.emplace(id.iota[p], p);
    if (!fresh) {
      fail(why, "two points share an image", std::make_pair(it->second, p));
      return std::nullopt;
    }
  }
  id.color_to_intersection.assign(c.num_colors(), -1);
  std::vector<std::pair<int, int>> first_pair(c.num_colors(), {-1, -1});
  std::vector<int> color_of_size(id.s + 1, -1);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      std::vector<int> common;
      std::set_intersection(id.iota[x].begin(), id.iota[x].end(), id.iota[y].begin(),
                            id.iota[y].end(), std::back_inserter(common));
      int meet = static_cast<int>(common.size()), k = col(c, x, y);
      int& known = id.color_to_intersection[k];
      if (known == -1) {
        known = meet;
        first_pair[k] = {x, y};
      } else if (known != meet) {
        fail(why, "intersection size is not a function of the color", std::make_pair(x, y));
        return std::nullopt;
      }
      if (injective_colors) {
        int& other = color_of_size[meet];
        if (other == -1) other = k;
        else if (other != k) {
          fail(why, "two colors share an intersection size", std::make_pair(x, y));
          return std::nullopt;
        }
      }
    }
  if ((m_claim && m_claim != id.m) || (s_claim && s_claim != id.s)) {
    fail(why, "parameters differ from the claim: found m=" + std::to_string(id.m) +
                  " s=" + std::to_string(id.s));
    return std::nullopt;
  }
  return id;
}

// Works for every m >= 2s once upsilon is the |x & y| = s-1 relation. With
// d the distance in that graph, Z(x,y) = {z : d(y,z) = d(x,z) - 1} is the
// set of points holding b but not a, where y = A+b and x = A+a. The
// neighbours of y form an s by (m-s) rook graph; over a line of size m-s
// (fixed b) these sets cover exactly the points holding b.
std::optional<JohnsonId> johnson_by_distance(const Configuration& c, int upsilon,
                                             bool injective_colors, int m_claim, int s_claim,
                                             IdentifyFailure* why) {
  int n = c.gamma_size();
  std::vector<std::vector<int>> adj(n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (x != y && col(c, x, y) == upsilon) adj[x].push_back(y);
  int valency = static_cast<int>(adj[0].size());
  for (const auto& a : adj)
    if (static_cast<int>(a.size()) != valency) {
      fail(why, "color graph is not regular");
      return std::nullopt;
    }
  int m = 0, s = 0;
  for (int mm = 2; mm <= n + 1 && !m; ++mm)
    for (int ss = 1; 2 * ss <= mm; ++ss)
      if (binomial(mm, ss) == n && ss * (mm - ss) == valency) {
        m = mm;
        s = ss;
        break;
      }
  if (!m) {
    fail(why, "no J(m,s) has this size and valency");
    return std::nullopt;
  }
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
  for (int x = 0; x < n; ++x) {
    std::deque<int> q{x};
    dist[x][x] = 0;
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (int v : adj[u])
        if (dist[x][v] < 0) dist[x][v] = dist[x][u] + 1, q.push_back(v);
    }
    for (int v = 0; v < n; ++v)
      if (dist[x][v] < 0) {
        fail(why, "color graph is disconnected");
        return std::nullopt;
      }
  }
  JohnsonId id;
  id.upsilon = id.delta = upsilon;
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> found;
  // Rows have m-s points, columns s; when m = 2s both are collected and one
  // family is kept below.
  auto wanted = [&](std::size_t size) { return static_cast<int>(size) == m - s; };
  std::size_t limit = m == 2 * s ? 2 * m : m;
  for (int y = 0; y < n && found.size() < limit; ++y) {
    std::vector<char> nb(n, 0);
    for (int v : adj[y]) nb[v] = 1;
    std::set<std::vector<int>> lines;
    for (int x : adj[y])
      for (int v : adj[x]) {
        if (!nb[v] || v < x) continue;
        std::vector<int> line{x, v};
        for (int w : adj[x])
          if (nb[w] && w != v && dist[v][w] == 1) line.push_back(w);
        std::sort(line.begin(), line.end());
        if (wanted(line.size())) lines.insert(line);
      }
    for (const auto& line : lines) {
      std::vector<char> in(n, 0);
      for (int v : line)
        for (int z = 0; z < n; ++z)
          if (dist[y][z] == dist[v][z] - 1) in[z] = 1;
      std::vector<int> set;
      for (int z = 0; z < n; ++z)
        if (in[z]) set.push_back(z);
      if (seen.insert(set).second) found.push_back(std::move(set));
    }
  }
  if (m == 2 * s && !found.empty()) {
    // Sets of one family meet in C(m-2,s-2) points, across families in
    // C(m-2,s-1) or not at all.
    BigInt same = binomial(m - 2, s - 2);
    std::vector<char> mark(n, 0);
    for (int z : found[0]) mark[z] = 1;
    for (const auto& f : found) {
      long long meet = 0;
      for (int z : f) meet += mark[z];
      if (&f == &found[0] || BigInt(meet) == same) id.lambda.push_back(f);
    }
  } else {
    id.lambda = std::move(found);
  }
  return finish_johnson(c, std::move(id), injective_colors, m_claim, s_claim, why);
}

std::optional<JohnsonId> identify_core(const Configuration& c, bool injective, int m, int s,
                                       IdentifyFailure* why) {
  require_classical(c);
  int n = c.gamma_size();
  if (n == 0) {
    fail(why, "empty configuration");
    return std::nullopt;
  }
  std::vector<long long> size(c.num_colors(), 0);
  std::vector<char> diag(c.num_colors(), 0);
  for (int x = 0; x < n; ++x) {
    diag[col(c, x, x)] = 1;
    for (int y = 0; y < n; ++y) ++size[col(c, x, y)];
  }
  if (std::count(diag.begin(), diag.end(), 1) != 1) {
    fail(why, "not homogeneous");
    return std::nullopt;
  }
  std::vector<int> edge;
  for (int k = 0; k < c.num_colors(); ++k)
    if (!diag[k]) edge.push_back(k);
  if (edge.size() <= 1) {
    // The clique: J(n,1).
    JohnsonId id;
    id.m = n;
    id.s = 1;
    for (int p = 0; p < n; ++p) {
      id.lambda.push_back({p});
      id.iota.push_back({p});
    }
    id.color_to_intersection.assign(c.num_colors(), -1);
    id.color_to_intersection[col(c, 0, 0)] = 1;
    if (!edge.empty()) id.color_to_intersection[edge[0]] = 0, id.upsilon = id.delta = edge[0];
    if ((m && m != n) || (s && s != 1)) {
      fail(why, "clique is J(n,1), not the claimed parameters");
      return std::nullopt;
    }
    return id;
  }
  int small = edge[0], large = edge[0];
  for (int k : edge) {
    if (size[k] < size[small]) small = k;
    if (size[k] > size[large]) large = k;
  }
  std::vector<std::pair<int, int>> order{{small, large}, {large, small}};
  for (int u : edge)
    for (int d : edge)
      if (u != d && std::find(order.begin(), order.end(), std::make_pair(u, d)) == order.end())
        order.emplace_back(u, d);
  IdentifyFailure last;
  for (auto [u, d] : order) {
    IdentifyFailure here;
    if (auto id = johnson_from(c, u, d, injective, m, s, &here)) return id;
    if (!last.witness || here.witness) last = here;
  }
  // For small m the smallest orbital need not be |x & y| = s-1; try each.
  for (int u : edge) {
    IdentifyFailure here;
    if (auto id = johnson_by_distance(c, u, injective, m, s, &here)) return id;
  }
  if (why) *why = last;
  return std::nullopt;
}

}  // namespace

std::optional<JohnsonId> identify_johnson(const Configuration& c, int m, int s,
                                          IdentifyFailure* why) {
  return identify_core(c, true, m, s, why);
}

Configuration orbital_configuration(const GenSet& gens) {
  int n = gens.degree;
  std::size_t N = dense_size(n, 2);
  UnionFind uf(N);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (const auto& g : gens.gens)
        uf.unite(x * n + y, g[x] * n + g[y]);
  std::vector<int> colors(N);
  std::map<int, int> label;
  for (std::size_t p = 0; p < N; ++p) {
    auto it = label.emplace(uf.find(static_cast<int>(p)), static_cast<int>(label.size())).first;
    colors[p] = it->second;
  }
  return Configuration::from_colors(n, 2, colors);
}

std::optional<AltIdentification> try_identify_alt_action(const GenSet& gens, int m, int k,
                                                         IdentifyFailure* why) {
  gens.check();
  int n = gens.degree;
  if (n == 0 || orbits(gens).size() != 1) {
    fail(why, "group is not transitive");
    return std::nullopt;
  }
  if (m && k && binomial(m, k) != n) {
    fail(why, "degree is not C(m,k)");
    return std::nullopt;
  }
  AltIdentification out;
  if (k == 1 || (k == 0 && m == n)) {
    out.m = n;
    out.k = 1;
    for (int p = 0; p < n; ++p) {
      out.lambda.push_back({p});
      out.iota.push_back({p});
    }
    out.images = gens;
  } else {
    auto id = identify_core(orbital_configuration(gens), false, m, k, why);
    if (!id) return std::nullopt;
    out.m = id->m;
    out.k = id->s;
    out.lambda = id->lambda;
    out.iota = id->iota;
    std::map<std::vector<int>, int> index;
    for (int i = 0; i < out.m; ++i) index[out.lambda[i]] = i;
    out.images = GenSet(out.m);
    for (const auto& g : gens.gens) {
      std::vector<int> img(out.m);
      for (int i = 0; i < out.m; ++i) {
        std::vector<int> moved;
        for (int p : out.lambda[i]) moved.push_back(g[p]);
        std::sort(moved.begin(), moved.end());
        auto it = index.find(moved);
        if (it == index.end()) {
          fail(why, "a generator does not permute Lambda");
          return std::nullopt;
        }
        img[i] = it->second;
      }
      out.images.gens.emplace_back(img);
    }
  }
  for (std::size_t j = 0; j < gens.gens.size(); ++j) {
    const auto& g = gens.gens[j];
    const auto& phi = out.images.gens[j];
    for (int w = 0; w < n; ++w) {
      std::vector<int> moved;
      for (int i : out.iota[w]) moved.push_back(phi[i]);
      std::sort(moved.begin(), moved.end());
      if (moved != out.iota[g[w]]) {
        fail(why, "iota does not intertwine the actions", std::make_pair(w, g[w]));
        return std::nullopt;
      }
    }
    out.images_even = out.images_even && phi.sign() == 1;
  }
  return out;
}

AltIdentification identify_alt_action(const GenSet& gens, int m, int k) {
  IdentifyFailure why;
  auto r = try_identify_alt_action(gens, m, k, &why);
  if (!r) throw InputError("alternating action not identified: " + why.reason);
  return *r;
}

DesignCheck check_design(int v, const std::vector<std::vector<int>>& edges, int t) {
  if (v < 1 || t < 1 || t > v) throw InputError("design check: bad v or t");
  DesignCheck d;
  d.v = v;
  d.t = t;
  d.b = static_cast<int>(edges.size());
  d.u = edges.empty() ? 0 : static_cast<int>(edges[0].size());
  std::vector<std::vector<char>> member;
  for (const auto& e : edges) {
    if (static_cast<int>(e.size()) != d.u) throw InputError("design check: edges not uniform");
    std::vector<char> in(v, 0);
    for (int p : e) {
      if (p < 0 || p >= v || in[p]) throw InputError("design check: bad edge");
      in[p] = 1;
    }
    member.push_back(std::move(in));
  }
  long long common = -1;
  bool equal = true;
  for (const auto& T : k_subsets(v, t)) {
    long long cnt = 0;
    for (const auto& in : member)
      cnt += std::all_of(T.begin(), T.end(), [&](int p) { return in[p]; });
    if (common == -1) common = cnt;
    else if (cnt != common) equal = false;
  }
  if (!equal) return d;
  d.lambda = common;
  d.is_t_design = common >= 1;
  if (!d.is_t_design) return d;
  d.count_formula_ok = BigInt(d.b) * binomial(d.u, t) == BigInt(common) * binomial(v, t);
  if (t >= 2 && d.u < v) d.fisher_ok = d.b >= v;
  for (int s = 1; s <= std::min(t / 2, v - d.u); ++s)
    d.rw_bound_ok = d.rw_bound_ok && BigInt(d.b) >= binomial(v, s);
  return d;
}

namespace {

// Records a witness if the values over `who` are not all equal.
bool constant_over(const std::vector<int>& who, const std::vector<int>& value,
                   const std::string& check, std::vector<int> colors, SemiregularReport& rep) {
  for (int p : who)
    if (value[p] != value[who[0]]) {
      rep.ok = false;
      if (rep.witnesses.size() < 20)
        rep.witnesses.push_back({check, std::move(colors), who[0], p, value[who[0]], value[p]});
      return false;
    }
  return true;
}

}  // namespace

SemiregularReport semiregular_checks(const Configuration& c) {
  require_classical(c);
  int n = c.gamma_size(), nc = c.num_colors();
  SemiregularReport rep;
  std::map<int, std::vector<int>> classes;
  for (int v = 0; v < n; ++v) classes[col(c, v, v)].push_back(v);
  std::vector<int> class_of(n);
  for (int v = 0; v < n; ++v) class_of[v] = col(c, v, v);

  // Where each edge color lives: (class of x, class of y) at first sight.
  std::vector<std::pair<int, int>> home(nc, {-1, -1});
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (x != y && home[col(c, x, y)].first == -1)
        home[col(c, x, y)] = {class_of[x], class_of[y]};

  for (int r = 0; r < nc; ++r) {
    auto [c1, c2] = home[r];
    if (c1 == -1) continue;
    std::vector<int> out(n, 0), in(n, 0);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (col(c, x, y) == r) ++out[x], ++in[y];
    constant_over(classes[c1], out, "bipartite out-degree", {r}, rep);
    constant_over(classes[c2], in, "bipartite in-degree", {r}, rep);
  }

  // Contracted graph: green in C1 x C2, components of red inside C2.
  for (int green = 0; green < nc; ++green) {
    auto [c1, c2] = home[green];
    if (c1 == -1) continue;
    for (int red = 0; red < nc; ++red) {
      if (red == green || home[red] != std::make_pair(c2, c2)) continue;
      UnionFind uf(n);
      for (int a : classes[c2])
        for (int b : classes[c2])
          if (col(c, a, b) == red) uf.unite(a, b);
      auto comps = cells(uf, classes[c2]);
      std::vector<int> comp_of(n, -1);
      for (std::size_t i = 0; i < comps.size(); ++i)
        for (int p : comps[i]) comp_of[p] = static_cast<int>(i);
      std::vector<int> deg_x(n, 0), deg_comp(comps.size(), 0);
      for (int x : classes[c1]) {
        std::vector<char> hit(comps.size(), 0);
        for (int y : classes[c2])
          if (col(c, x, y) == green) hit[comp_of[y]] = 1;
        for (std::size_t i = 0; i < comps.size(); ++i)
          if (hit[i]) ++deg_x[x], ++deg_comp[i];
      }
      constant_over(classes[c1], deg_x, "contracted degree (vertex side)", {green, red}, rep);
      std::vector<int> idx(comps.size());
      std::iota(idx.begin(), idx.end(), 0);
      constant_over(idx, deg_comp, "contracted degree (component side)", {green, red}, rep);
    }
  }

  if (n <= 40 && nc <= 12) {
    rep.triples_checked = true;
    for (int y = 0; y < n; ++y)
      for (int cyan = 0; cyan < nc; ++cyan) {
        // deg[x][beige] = #{x' : c(x',y) = beige, c(x,x') = cyan}; the
        // reverse count uses c(x',x) = cyan.
        std::vector<std::vector<int>> fwd(nc, std::vector<int>(n, 0)),
            bwd(nc, std::vector<int>(n, 0));
        for (int x = 0; x < n; ++x)
          for (int x2 = 0; x2 < n; ++x2) {
            if (col(c, x, x2) == cyan) ++fwd[col(c, x2, y)][x];
            if (col(c, x2, x) == cyan) ++bwd[col(c, x2, y)][x];
          }
        std::vector<std::vector<int>> level(nc);
        for (int x = 0; x < n; ++x) level[col(c, x, y)].push_back(x);
        for (int aqua = 0; aqua < nc; ++aqua) {
          if (level[aqua].empty()) continue;
          for (int beige = 0; beige < nc; ++beige) {
            if (level[beige].empty()) continue;
            constant_over(level[aqua], fwd[beige], "level triple (first side)",
                          {aqua, beige, cyan}, rep);
            constant_over(level[beige], bwd[aqua], "level triple (second side)",
                          {aqua, beige, cyan}, rep);
          }
        }
      }
  }
  return rep;
}

}  // namespace giso
