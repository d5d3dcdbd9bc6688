#include "giso/split_johnson.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include <boost/container_hash/hash.hpp>

#include "giso/errors.hpp"
#include "giso/wl.hpp"

namespace giso {

std::size_t ScriptedChooser::choose(std::size_t count, const std::string&) {
  if (pos_ < script_.size()) {
    std::size_t i = script_[pos_++];
    if (i >= count) throw InternalError("scripted choice out of range");
    return i;
  }
  throw ChoicePending{count};
}

void for_each_choice_sequence(const std::function<void(Chooser&)>& body,
                              std::size_t max_runs) {
  std::size_t runs = 0;
  std::vector<std::size_t> script;
  std::function<void()> dfs = [&]() {
    ScriptedChooser ch(script);
    try {
      body(ch);
    } catch (const ChoicePending& p) {
      for (std::size_t i = 0; i < p.count; ++i) {
        script.push_back(i);
        dfs();
        script.pop_back();
      }
      return;
    }
    if (++runs > max_runs)
      throw ResourceError("more than " + std::to_string(max_runs) + " choice sequences");
  };
  dfs();
}

void SoJTrail::choice(std::size_t count, int point, const std::string& what) {
  index_cost *= count;
  choice_sizes.push_back(count);
  if (point >= 0 && std::find(stabilized.begin(), stabilized.end(), point) == stabilized.end())
    stabilized.push_back(point);
  ledger.push_back(what + ": " + (point >= 0 ? "fixed " + std::to_string(point) + ", " : "") +
                   std::to_string(count) + " candidates");
}

// ---------------------------------------------------------------------------

ColoredPartition ColoredPartition::build(int universe, std::vector<int> domain,
                                         const std::vector<Configuration::Description>& desc,
                                         const std::vector<int>& part) {
  if (desc.size() != domain.size() || part.size() != domain.size())
    throw InputError("colored partition: size mismatch");
  ColoredPartition cp;
  cp.universe = universe;
  std::vector<std::size_t> order(domain.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return domain[a] < domain[b]; });
  for (auto i : order) cp.domain.push_back(domain[i]);
  std::set<Configuration::Description> pal(desc.begin(), desc.end());
  cp.palette.assign(pal.begin(), pal.end());
  cp.color.assign(universe, -1);
  std::vector<std::map<int, std::vector<int>>> groups(cp.palette.size());
  for (std::size_t i = 0; i < domain.size(); ++i) {
    int p = domain[i];
    if (p < 0 || p >= universe || cp.color[p] != -1) throw InputError("colored partition: bad domain");
    int col = static_cast<int>(std::lower_bound(cp.palette.begin(), cp.palette.end(), desc[i]) -
                               cp.palette.begin());
    cp.color[p] = col;
    groups[col][part[i]].push_back(p);
  }
  for (auto& g : groups) {
    std::vector<std::vector<int>> parts;
    for (auto& [key, pts] : g) {
      std::sort(pts.begin(), pts.end());
      parts.push_back(pts);
    }
    std::sort(parts.begin(), parts.end());
    cp.cells.push_back(std::move(parts));
  }
  return cp;
}

bool ColoredPartition::admissible(std::string* why) const {
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (cells[c].size() < 2) continue;
    for (const auto& p : cells[c])
      if (p.size() != cells[c][0].size() || p.size() < 2) {
        if (why) *why = "color " + std::to_string(c) + " has unequal or singleton parts";
        return false;
      }
  }
  return true;
}

std::size_t ColoredPartition::largest_part() const {
  std::size_t m = 0;
  for (const auto& c : cells)
    for (const auto& p : c) m = std::max(m, p.size());
  return m;
}

bool ColoredPartition::is_alpha(double alpha) const {
  return static_cast<double>(largest_part()) <= alpha * domain.size() + 1e-9;
}

std::uint64_t ColoredPartition::signature() const {
  std::size_t h = domain.size();
  for (std::size_t c = 0; c < palette.size(); ++c) {
    boost::hash_combine(h, boost::hash_range(palette[c].begin(), palette[c].end()));
    boost::hash_combine(h, cells[c].size());
    boost::hash_combine(h, cells[c][0].size());
  }
  return h;
}

bool SoJOutcome::verify(double alpha, std::string* why) const {
  auto bad = [&](const std::string& s) {
    if (why) *why = s;
    return false;
  };
  if (!partition.admissible(why)) return false;
  if (variant == Variant::Partition) {
    if (!partition.is_alpha(alpha)) return bad("a part exceeds alpha |domain|");
    return true;
  }
  if (!johnson) return bad("Johnson variant without identification");
  if (static_cast<double>(gamma0.size()) < alpha * partition.domain.size() - 1e-9)
    return bad("Johnson domain smaller than alpha |domain|");
  int col = partition.color[gamma0[0]];
  if (col < 0 || partition.cells[col].size() != 1 || partition.cells[col][0] != gamma0)
    return bad("Johnson domain is not an unsplit color class");
  const auto& id = *johnson;
  if (id.s < 2 || id.m < 2 * id.s) return bad("degenerate Johnson parameters");
  if (id.iota.size() != gamma0.size()) return bad("iota size mismatch");
  if (binomial(id.m, id.s) != gamma0.size()) return bad("|gamma0| is not C(m,s)");
  std::set<std::vector<int>> seen;
  for (const auto& img : id.iota) {
    if (static_cast<int>(img.size()) != id.s || !std::is_sorted(img.begin(), img.end()) ||
        std::adjacent_find(img.begin(), img.end()) != img.end())
      return bad("an image is not an s-subset");
    for (int v : img)
      if (v < 0 || v >= id.m) return bad("image outside Lambda");
    if (!seen.insert(img).second) return bad("iota is not injective");
  }
  for (int i = 0; i < id.m; ++i) {
    std::vector<int> holders;
    for (std::size_t j = 0; j < gamma0.size(); ++j)
      if (std::binary_search(id.iota[j].begin(), id.iota[j].end(), i)) holders.push_back(gamma0[j]);
    if (holders != id.lambda[i]) return bad("lambda disagrees with iota");
  }
  return true;
}

std::uint64_t SoJOutcome::signature() const {
  std::size_t h = static_cast<std::size_t>(variant);
  boost::hash_combine(h, partition.signature());
  if (johnson) {
    boost::hash_combine(h, johnson->m);
    boost::hash_combine(h, johnson->s);
  }
  for (auto c : trail.choice_sizes) boost::hash_combine(h, c);
  return h;
}

// ---------------------------------------------------------------------------

namespace {

int col2(const Configuration& c, int x, int y) {
  return c.color(static_cast<std::size_t>(x) * c.gamma_size() + y);
}

int glob(const std::vector<int>& global_of, int p) { return global_of.empty() ? p : global_of[p]; }

bool is_clique_on(const Configuration& c2, const std::vector<int>& cls) {
  int seen = -1;
  for (int a : cls)
    for (int b : cls) {
      if (a == b) continue;
      int k = col2(c2, a, b);
      if (seen == -1) seen = k;
      else if (seen != k) return false;
    }
  return true;
}

}  // namespace

DesignLemmaResult design_lemma(const Configuration& c, double alpha, Chooser& chooser,
                               SoJTrail& trail, const std::vector<int>& global_of) {
  int m = c.gamma_size(), k = c.arity();
  if (k < 2 || 2 * k > m) throw InputError("design lemma needs 2 <= k <= |Gamma|/2");
  if (alpha < 0.5 || alpha >= 1) throw InputError("design lemma needs 1/2 <= alpha < 1");
  for (const auto& cl : twin_classes(c))
    if (cl.size() > alpha * m) throw InputError("twin class larger than alpha |Gamma|");
  auto dominant = [&](const Configuration& v1, int& color, std::vector<int>& cls) {
    auto sizes = v1.class_sizes();
    for (int i = 0; i < v1.num_colors(); ++i)
      if (sizes[i] > alpha * m) {
        color = i;
        cls.clear();
        for (int p = 0; p < m; ++p)
          if (v1.color(p) == i) cls.push_back(p);
        return true;
      }
    return false;
  };
  for (int l = 0; l < k; ++l) {
    std::vector<std::size_t> case1, case2;
    std::size_t count = dense_size(m, l);
    Configuration probe = Configuration::from_colors(m, l, std::vector<int>(count, 0));
    for (std::size_t idx = 0; idx < count; ++idx) {
      Tuple prefix = probe.tuple_at(idx);
      auto r = restrict_by_tuple(c, prefix);
      auto v1 = skeleton(r, 1);
      int dc;
      std::vector<int> cls;
      if (!dominant(v1, dc, cls)) case1.push_back(idx);
      else if (l < k - 1 && case1.empty() && !is_clique_on(skeleton(r, 2), cls))
        case2.push_back(idx);
    }
    if (case1.empty() && case2.empty()) continue;
    const auto& list = case1.empty() ? case2 : case1;
    std::size_t pick = chooser.choose(list.size(), "design lemma prefix");
    DesignLemmaResult res;
    res.kind = case1.empty() ? DesignLemmaResult::Kind::NonClique
                             : DesignLemmaResult::Kind::NoDominant;
    res.prefix = probe.tuple_at(list[pick]);
    res.candidates = list.size();
    trail.choice(list.size(), -1, "design lemma prefix of length " + std::to_string(l));
    for (int p : res.prefix) trail.choice(1, glob(global_of, p), "design lemma point");
    auto r = restrict_by_tuple(c, res.prefix);
    res.coloring = skeleton(r, 1);
    bool dom = dominant(res.coloring, res.dominant_color, res.dominant_class);
    if (res.kind == DesignLemmaResult::Kind::NoDominant) {
      if (dom) throw InternalError("design lemma: re-verification failed");
      res.dominant_color = -1;
      res.dominant_class.clear();
    } else {
      res.restricted = induced(skeleton(r, 2), res.dominant_class);
      if (!dom || is_clique_on(res.restricted, [&] {
            std::vector<int> all(res.dominant_class.size());
            std::iota(all.begin(), all.end(), 0);
            return all;
          }()))
        throw InternalError("design lemma: re-verification failed");
    }
    return res;
  }
  throw InternalError("design lemma exhausted every prefix; the input violates its hypotheses");
}

bool large_clique_twin_check(const Configuration& c, const std::vector<int>& cls) {
  if (c.arity() != 2) throw InputError("classical configuration required");
  if (cls.empty() || 2 * cls.size() < static_cast<std::size_t>(c.gamma_size()))
    throw InputError("class must hold at least half of the points");
  if (!check_coherent(c).is_coherent) throw InputError("configuration is not coherent");
  bool twins = true;
  for (std::size_t i = 1; i < cls.size() && twins; ++i) twins = are_twins(c, cls[0], cls[i]);
  // At |cls| = |Gamma|/2 exactly the implication fails (the ends of a path
  // on four vertices), so only larger classes are held to it.
  if (is_clique_on(c, cls) && !twins && 2 * cls.size() > static_cast<std::size_t>(c.gamma_size()))
    throw InternalError("large clique class is not a twin class");
  return twins;
}

// ---------------------------------------------------------------------------

namespace {

// Bipartite graph on global labels; a V2 element may be a set of points
// (a block), represented in the trail by its least point.
struct Bip {
  std::vector<int> v1;
  std::vector<std::vector<int>> v2;
  std::vector<std::vector<char>> adj;
};

int rep(const std::vector<int>& s) { return *std::min_element(s.begin(), s.end()); }

std::vector<std::vector<int>> row_twins(const Bip& g, const std::vector<int>& rows,
                                        const std::vector<int>& cols) {
  std::map<std::vector<char>, std::vector<int>> by;
  for (int r : rows) {
    std::vector<char> key;
    key.reserve(cols.size());
    for (int c : cols) key.push_back(g.adj[r][c]);
    by[key].push_back(r);
  }
  std::vector<std::vector<int>> out;
  for (auto& [k, v] : by) out.push_back(std::move(v));
  return out;
}

std::size_t max_size(const std::vector<std::vector<int>>& cls) {
  std::size_t m = 0;
  for (const auto& c : cls) m = std::max(m, c.size());
  return m;
}

std::vector<int> iota_vec(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

Bip restrict_cols(const Bip& g, const std::vector<int>& cols) {
  Bip h;
  h.v1 = g.v1;
  for (int c : cols) h.v2.push_back(g.v2[c]);
  h.adj.assign(g.v1.size(), {});
  for (std::size_t r = 0; r < g.v1.size(); ++r)
    for (int c : cols) h.adj[r].push_back(g.adj[r][c]);
  return h;
}

Bip restrict_rows(const Bip& g, const std::vector<int>& rows) {
  Bip h;
  h.v2 = g.v2;
  for (int r : rows) {
    h.v1.push_back(g.v1[r]);
    h.adj.push_back(g.adj[r]);
  }
  return h;
}

class Ladder {
 public:
  Ladder(const std::vector<int>& top, int universe, double beta, Chooser& chooser,
         const SoJParams& params, SoJTrail& trail)
      : top_(top), universe_(universe), beta_(beta), chooser_(chooser), params_(params),
        trail_(trail), label_(top.size()), part_(top.size(), -1) {
    for (std::size_t i = 0; i < top.size(); ++i) pos_[top[i]] = static_cast<int>(i);
    target_ = beta * top.size();
  }

  SoJOutcome run(Bip g);

 private:
  void refine(const std::vector<int>& pts, const std::function<std::vector<std::int64_t>(int)>& f) {
    for (int p : pts) {
      auto extra = f(p);
      auto& l = label_[pos_.at(p)];
      l.insert(l.end(), extra.begin(), extra.end());
    }
  }
  bool finish(SoJOutcome& out, bool johnson = false) {
    out.partition = ColoredPartition::build(universe_, top_, label_, part_);
    return out.partition.admissible() && (johnson || out.partition.is_alpha(beta_));
  }
  SoJOutcome individualize_v1(const Bip& g, const std::string& why);
  SoJOutcome individualize_v2(const Bip& g, const std::string& why);
  std::optional<std::vector<int>> reduc2(const Bip& g, const std::vector<int>& s,
                                         const std::vector<int>& rest);
  SoJOutcome done(SoJOutcome out) {
    out.trail = trail_;
    return out;
  }

  std::vector<int> top_;
  int universe_;
  double beta_, target_;
  Chooser& chooser_;
  const SoJParams& params_;
  SoJTrail& trail_;
  std::map<int, int> pos_;
  std::vector<Configuration::Description> label_;
  std::vector<int> part_;
  int next_key_ = 0;
};

SoJOutcome Ladder::individualize_v1(const Bip& g, const std::string& why) {
  trail_.note("individualize V1: " + why);
  std::vector<int> left = g.v1;
  std::sort(left.begin(), left.end());
  std::int64_t position = 0;
  while (!left.empty()) {
    std::size_t i = chooser_.choose(left.size(), "individualize V1");
    int p = left[i];
    trail_.choice(left.size(), p, "individualize V1");
    label_[pos_.at(p)].push_back(position++);
    left.erase(left.begin() + i);
  }
  SoJOutcome out;
  if (!finish(out)) throw InternalError("individualized coloring is not a beta-partition");
  return done(out);
}

SoJOutcome Ladder::individualize_v2(const Bip& g, const std::string& why) {
  trail_.note("individualize V2: " + why);
  std::vector<int> left = iota_vec(static_cast<int>(g.v2.size()));
  std::sort(left.begin(), left.end(), [&](int a, int b) { return rep(g.v2[a]) < rep(g.v2[b]); });
  std::vector<std::int64_t> position(g.v2.size());
  std::int64_t next = 0;
  while (!left.empty()) {
    std::size_t i = chooser_.choose(left.size(), "individualize V2");
    int c = left[i];
    trail_.choice(left.size(), rep(g.v2[c]), "individualize V2");
    position[c] = next++;
    left.erase(left.begin() + i);
  }
  std::map<int, int> row;
  for (std::size_t r = 0; r < g.v1.size(); ++r) row[g.v1[r]] = static_cast<int>(r);
  refine(g.v1, [&](int p) {
    std::vector<std::int64_t> nb;
    for (std::size_t c = 0; c < g.v2.size(); ++c)
      if (g.adj[row[p]][c]) nb.push_back(position[c]);
    std::sort(nb.begin(), nb.end());
    nb.insert(nb.begin(), static_cast<std::int64_t>(nb.size()));
    return nb;
  });
  SoJOutcome out;
  if (finish(out)) return done(out);
  return individualize_v1(g, "neighborhood coloring left a large twin class");
}

std::optional<std::vector<int>> Ladder::reduc2(const Bip& g, const std::vector<int>& s,
                                               const std::vector<int>& rest) {
  auto rows = iota_vec(static_cast<int>(g.v1.size()));
  double bound = g.v1.size() / 2.0 + 1;
  if (!s.empty() && max_size(row_twins(g, rows, s)) < bound) return s;
  if (!rest.empty() && max_size(row_twins(g, rows, rest)) < bound) return rest;
  return std::nullopt;
}

// A union of reddest classes with |V2|/3 < |S| <= 2|V2|/3, or the reddest
// class above |V2|/3.
std::vector<int> third_of(const std::vector<std::vector<int>>& classes_by_color, int n2) {
  for (const auto& cl : classes_by_color)
    if (3 * cl.size() > static_cast<std::size_t>(n2)) return cl;
  std::vector<int> s;
  for (const auto& cl : classes_by_color) {
    s.insert(s.end(), cl.begin(), cl.end());
    if (3 * s.size() > static_cast<std::size_t>(n2)) break;
  }
  std::sort(s.begin(), s.end());
  return s;
}

std::vector<int> complement_of(const std::vector<int>& s, int n) {
  std::vector<char> in(n, 0);
  for (int x : s) in[x] = 1;
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (!in[i]) out.push_back(i);
  return out;
}

SoJOutcome Ladder::run(Bip g) {
  while (true) {
    int n1 = static_cast<int>(g.v1.size()), n2 = static_cast<int>(g.v2.size());
    SoJOutcome out;
    if (n1 <= target_) {
      if (finish(out)) return done(out);
      return individualize_v1(g, "small V1 but partition check failed");
    }
    auto rows = iota_vec(n1), cols = iota_vec(n2);
    auto twins = row_twins(g, rows, cols);
    if (3 * max_size(twins) > 2 * static_cast<std::size_t>(n1))
      return individualize_v1(g, "twin class above 2|V1|/3");
    if (n1 <= params_.base_size) return individualize_v1(g, "|V1| at most the base size");
    double small = std::pow(params_.small_v2_factor * std::log(double(n1)), 1.5);
    if (n2 <= small) return individualize_v2(g, "|V2| below (f ln|V1|)^{3/2}");

    // Twin count and degree.
    std::map<int, int> key_of_row;
    std::vector<int> twin_count(n1), degree(n1);
    for (const auto& cl : twins) {
      int key = cl.size() > 1 ? next_key_++ : -1;
      for (int r : cl) {
        twin_count[r] = static_cast<int>(cl.size()) - 1;
        key_of_row[r] = key;
      }
    }
    for (int r = 0; r < n1; ++r) degree[r] = static_cast<int>(std::count(g.adj[r].begin(), g.adj[r].end(), 1));
    std::map<int, int> row_of;
    for (int r = 0; r < n1; ++r) row_of[g.v1[r]] = r;
    refine(g.v1, [&](int p) {
      int r = row_of[p];
      return std::vector<std::int64_t>{twin_count[r], degree[r]};
    });
    for (int r = 0; r < n1; ++r) part_[pos_.at(g.v1[r])] = key_of_row[r];
    std::map<int, std::vector<int>> by_degree;
    for (int r = 0; r < n1; ++r)
      if (twin_count[r] == 0) by_degree[degree[r]].push_back(r);
    std::vector<int> v1p;
    int d1 = -1;
    for (auto& [d, rs] : by_degree)
      if (rs.size() > target_) v1p = rs, d1 = d;
    if (v1p.empty()) {
      if (finish(out)) return done(out);
      return individualize_v1(g, "twin and degree coloring failed the partition check");
    }
    g = restrict_rows(g, v1p);
    n1 = static_cast<int>(g.v1.size());
    trail_.note("V1' of size " + std::to_string(n1) + " with degree " + std::to_string(d1));
    if (d1 <= 1 || d1 >= n2 - 1) return individualize_v2(g, "degree out of range");
    if (2 * d1 > n2) {
      for (auto& row : g.adj)
        for (auto& a : row) a = !a;
      d1 = n2 - d1;
      trail_.note("complemented A");
    }

    // Neighborhood hypergraph.
    std::vector<std::vector<int>> hyper(n1);
    for (int r = 0; r < n1; ++r)
      for (int c = 0; c < n2; ++c)
        if (g.adj[r][c]) hyper[r].push_back(c);
    if (binomial(n2, d1) == n1) {
      trail_.note("neighborhoods form the complete hypergraph");
      if (!finish(out, true)) throw InternalError("labels around the Johnson class are not admissible");
      out.variant = SoJOutcome::Variant::Johnson;
      out.gamma0 = g.v1;
      std::sort(out.gamma0.begin(), out.gamma0.end());
      JohnsonId id;
      id.m = n2;
      id.s = d1;
      id.lambda.assign(n2, {});
      std::map<int, int> r_of;
      for (int r = 0; r < n1; ++r) r_of[g.v1[r]] = r;
      for (int p : out.gamma0) {
        id.iota.push_back(hyper[r_of[p]]);
        for (int c : hyper[r_of[p]]) id.lambda[c].push_back(p);
      }
      out.johnson = id;
      return done(out);
    }

    double l = std::log(double(n1)) / std::log(double(n2));
    int d6 = 6 * static_cast<int>(std::ceil(l));
    int d = d1 <= d6 ? d1 : d6;
    if (d > params_.max_d)
      return individualize_v2(g, std::to_string(d) + "-ary structure above the arity cap");
    if (2 * d > n2) return individualize_v2(g, "V2 too small for a d-ary structure");
    std::map<std::vector<int>, std::int64_t> contain;
    for (const auto& h : hyper)
      for (const auto& sub : k_subsets(d1, d)) {
        std::vector<int> s;
        for (int i : sub) s.push_back(h[i]);
        ++contain[s];
      }
    std::size_t nt = dense_size(n2, d);
    std::vector<Configuration::Description> desc(nt);
    Configuration shape = Configuration::from_colors(n2, d, std::vector<int>(nt, 0));
    for (std::size_t idx = 0; idx < nt; ++idx) {
      Tuple t = shape.tuple_at(idx);
      std::sort(t.begin(), t.end());
      if (std::adjacent_find(t.begin(), t.end()) != t.end()) {
        desc[idx] = {-1};
        continue;
      }
      auto it = contain.find(t);
      desc[idx] = {it == contain.end() ? 0 : it->second};
    }
    auto dary = Configuration::from_descriptions(n2, d, desc);
    auto tw = twin_classes(dary);
    std::vector<int> biggest;
    for (const auto& cl : tw)
      if (cl.size() > biggest.size()) biggest = cl;
    if (2 * biggest.size() > static_cast<std::size_t>(n2)) {
      if (static_cast<int>(biggest.size()) == n2)
        return individualize_v2(g, "all of V2 are twins in the d-ary structure");
      auto pick = reduc2(g, biggest, complement_of(biggest, n2));
      if (!pick) return individualize_v2(g, "no half passes the twin bound");
      trail_.note("V2 twin class split, |V2| " + std::to_string(n2) + " -> " +
                  std::to_string(pick->size()));
      g = restrict_cols(g, *pick);
      continue;
    }

    auto coh = wl(f2_config(dary));
    std::vector<int> rep_of(n2);
    for (int c = 0; c < n2; ++c) rep_of[c] = rep(g.v2[c]);
    auto dl = design_lemma(coh, 2.0 / 3.0, chooser_, trail_, rep_of);
    auto classes_of = [&](const std::vector<int>& color) {
      std::map<int, std::vector<int>> by;
      for (int c = 0; c < n2; ++c) by[color[c]].push_back(c);
      std::vector<std::vector<int>> out;
      for (auto& [k, v] : by) out.push_back(v);
      return out;
    };
    auto shrink = [&](const std::vector<int>& s, const char* what) -> bool {
      auto pick = reduc2(g, s, complement_of(s, n2));
      if (!pick || 3 * pick->size() > 2 * static_cast<std::size_t>(n2)) return false;
      trail_.note(std::string(what) + ", |V2| " + std::to_string(n2) + " -> " +
                  std::to_string(pick->size()));
      g = restrict_cols(g, *pick);
      return true;
    };
    if (dl.kind == DesignLemmaResult::Kind::NoDominant) {
      if (!shrink(third_of(classes_of(dl.coloring.colors()), n2), "design lemma coloring"))
        return individualize_v2(g, "design lemma coloring gave no usable third");
      continue;
    }

    // Graph on V1' and V2 with the design lemma structure on the dominant class.
    const auto& cdom = dl.dominant_class;
    std::vector<int> pos_in_c(n2, -1);
    for (std::size_t i = 0; i < cdom.size(); ++i) pos_in_c[cdom[i]] = static_cast<int>(i);
    int nx = n1 + n2;
    std::vector<Configuration::Description> xd(dense_size(nx, 2));
    for (int a = 0; a < nx; ++a)
      for (int b = 0; b < nx; ++b) {
        auto& e = xd[static_cast<std::size_t>(a) * nx + b];
        bool ra = a < n1, rb = b < n1;
        if (a == b) e = ra ? Configuration::Description{0}
                           : Configuration::Description{1, dl.coloring.color(a - n1)};
        else if (ra && rb) e = {2};
        else if (ra) e = {3, g.adj[a][b - n1]};
        else if (rb) e = {4, g.adj[b][a - n1]};
        else if (pos_in_c[a - n1] >= 0 && pos_in_c[b - n1] >= 0)
          e = {5, dl.restricted.color(Tuple{pos_in_c[a - n1], pos_in_c[b - n1]})};
        else e = {6};
      }
    auto X = wl(f2_config(Configuration::from_descriptions(nx, 2, xd)));
    std::map<int, std::vector<int>> row_cls, col_cls;
    for (int a = 0; a < n1; ++a) row_cls[X.vertex_color(a)].push_back(a);
    for (int c = 0; c < n2; ++c) col_cls[X.vertex_color(n1 + c)].push_back(c);
    std::vector<int> c2;
    for (auto& [k, v] : col_cls)
      if (3 * v.size() > 2 * static_cast<std::size_t>(n2)) c2 = v;
    if (c2.empty()) {
      std::vector<std::vector<int>> cls;
      for (auto& [k, v] : col_cls) cls.push_back(v);
      if (!shrink(third_of(cls, n2), "coherent V2 coloring"))
        return individualize_v2(g, "coherent V2 coloring gave no usable third");
      continue;
    }
    std::vector<int> c1;
    for (auto& [k, v] : row_cls)
      if (v.size() > target_) c1 = v;
    std::map<int, int> r_of;
    for (int r = 0; r < n1; ++r) r_of[g.v1[r]] = r;
    refine(g.v1, [&](int p) { return std::vector<std::int64_t>{X.vertex_color(r_of[p])}; });
    if (c1.empty()) {
      if (finish(out)) return done(out);
      return individualize_v1(g, "coherent V1 coloring failed the partition check");
    }
    std::vector<int> c2x;
    for (int c : c2) c2x.push_back(n1 + c);
    if (is_clique_on(X, c2x)) return individualize_v2(g, "dominant V2 class is a clique");
    std::set<int> cross;
    for (int a : c1)
      for (int b : c2x) cross.insert(col2(X, a, b));
    if (cross.size() == 1) {
      auto rest = complement_of(c2, n2);
      auto pick = reduc2(g, {}, rest);
      if (!pick) return individualize_v2(g, "monochromatic C1 x C2 without a usable rest");
      trail_.note("monochromatic C1 x C2, |V2| " + std::to_string(n2) + " -> " +
                  std::to_string(rest.size()));
      g = restrict_rows(restrict_cols(g, rest), iota_vec(n1));
      continue;
    }
    std::vector<int> sub_pts = c1;
    sub_pts.insert(sub_pts.end(), c2x.begin(), c2x.end());
    std::vector<int> sub_global;
    for (int p : sub_pts) sub_global.push_back(p < n1 ? g.v1[p] : rep_of[p - n1]);
    auto sub = induced(X, sub_pts);
    auto res = coherent_soj(sub, chooser_, trail_, sub_global);
    // res.c1 / res.c2 are positions in sub_pts.
    if (res.is_partition) {
      for (std::size_t i = 0; i < res.c1.size(); ++i) {
        int p = g.v1[sub_pts[res.c1[i]]];
        label_[pos_.at(p)].push_back(res.color[i]);
        part_[pos_.at(p)] = res.part[i] < 0 ? -1 : next_key_ + res.part[i];
      }
      next_key_ += static_cast<int>(res.c1.size()) + 1;
      if (finish(out)) return done(out);
      return individualize_v1(g, "coherent partition failed the partition check");
    }
    std::set<int> w1set;
    for (int s : res.v1) w1set.insert(g.v1[sub_pts[s]]);
    std::vector<int> c1_global;
    for (int a : c1) c1_global.push_back(g.v1[a]);
    refine(c1_global, [&](int p) { return std::vector<std::int64_t>{w1set.count(p) ? 1 : 0}; });
    if (w1set.size() <= target_) {
      if (finish(out)) return done(out);
      return individualize_v1(g, "reduced V1 failed the partition check");
    }
    if (2 * res.v2.size() > static_cast<std::size_t>(n2))
      throw InternalError("coherent Split-or-Johnson did not halve V2");
    Bip next;
    for (int s : res.v1) next.v1.push_back(g.v1[sub_pts[s]]);
    for (const auto& el : res.v2) {
      std::vector<int> pts;
      for (int s : el) {
        const auto& orig = g.v2[sub_pts[s] - n1];
        pts.insert(pts.end(), orig.begin(), orig.end());
      }
      std::sort(pts.begin(), pts.end());
      next.v2.push_back(pts);
    }
    next.adj = res.adj;
    trail_.note("coherent reduction, |V2| " + std::to_string(n2) + " -> " +
                std::to_string(next.v2.size()));
    g = std::move(next);
  }
}

}  // namespace

SoJOutcome bipartite_soj(const BipartiteGraph& g, double beta, Chooser& chooser,
                         const SoJParams& params) {
  if (beta < 2.0 / 3.0 - 1e-12 || beta >= 1) throw InputError("beta must lie in [2/3, 1)");
  if (g.n2 >= beta * g.n1) throw InputError("bipartite Split-or-Johnson needs |V2| < beta |V1|");
  if (static_cast<int>(g.adj.size()) != g.n1) throw InputError("adjacency has wrong shape");
  for (const auto& row : g.adj)
    if (static_cast<int>(row.size()) != g.n2) throw InputError("adjacency has wrong shape");
  Bip b;
  b.v1 = iota_vec(g.n1);
  for (int j = 0; j < g.n2; ++j) b.v2.push_back({g.n1 + j});
  b.adj = g.adj;
  if (3 * max_size(row_twins(b, iota_vec(g.n1), iota_vec(g.n2))) > 2 * static_cast<std::size_t>(g.n1))
    throw InputError("a twin class in V1 exceeds 2|V1|/3");
  SoJTrail trail;
  Ladder ladder(b.v1, g.n1 + g.n2, beta, chooser, params, trail);
  auto out = ladder.run(b);
  std::string why;
  if (!out.verify(beta, &why)) throw InternalError("bipartite Split-or-Johnson: " + why);
  return out;
}

CoherentSoJResult coherent_soj(const Configuration& c, Chooser& chooser, SoJTrail& trail,
                               const std::vector<int>& global_of) {
  if (c.arity() != 2) throw InputError("classical configuration required");
  int n = c.gamma_size();
  std::map<int, std::vector<int>> classes;
  for (int v = 0; v < n; ++v) classes[col2(c, v, v)].push_back(v);
  if (classes.size() != 2) throw InputError("coherent Split-or-Johnson needs two vertex classes");
  CoherentSoJResult res;
  res.c1 = classes.begin()->second;
  res.c2 = std::next(classes.begin())->second;
  if (res.c1.size() < res.c2.size()) std::swap(res.c1, res.c2);
  if (res.c1.size() == res.c2.size()) throw InputError("vertex classes have equal size");
  if (!check_coherent(c).is_coherent) throw InputError("configuration is not coherent");
  const auto &C1 = res.c1, &C2 = res.c2;
  int n1 = static_cast<int>(C1.size()), n2 = static_cast<int>(C2.size());
  std::set<int> cross;
  for (int a : C1)
    for (int b : C2) cross.insert(col2(c, a, b));
  if (cross.size() < 2) throw InputError("c is constant on C1 x C2");
  if (is_clique_on(c, C2)) throw InputError("c restricted to C2 is a clique");
  if (is_clique_on(c, C1)) throw InternalError("C1 is a clique, against Fisher's inequality");

  auto colors_within = [&](const std::vector<int>& cls) {
    std::set<int> s;
    for (int a : cls)
      for (int b : cls)
        if (a != b) s.insert(col2(c, a, b));
    return std::vector<int>(s.begin(), s.end());
  };
  auto components = [&](const std::vector<int>& cls, int r) {
    std::map<int, int> idx;
    for (std::size_t i = 0; i < cls.size(); ++i) idx[cls[i]] = static_cast<int>(i);
    std::vector<int> parent = iota_vec(static_cast<int>(cls.size()));
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (int a : cls)
      for (int b : cls)
        if (a != b && col2(c, a, b) == r) parent[find(idx[a])] = find(idx[b]);
    std::map<int, std::vector<int>> by;
    for (std::size_t i = 0; i < cls.size(); ++i) by[find(static_cast<int>(i))].push_back(cls[i]);
    std::vector<std::vector<int>> out;
    for (auto& [k, v] : by) out.push_back(v);
    std::sort(out.begin(), out.end());
    return out;
  };
  auto partition_by = [&](const std::function<std::int64_t(int)>& color,
                          const std::function<int(int)>& part) {
    res.is_partition = true;
    for (int a : C1) {
      res.color.push_back(color(a));
      res.part.push_back(part(a));
    }
    return res;
  };

  // X[C1] imprimitive: the reddest disconnected color splits C1.
  for (int r : colors_within(C1)) {
    auto comps = components(C1, r);
    if (comps.size() < 2) continue;
    std::map<int, int> comp_of;
    for (std::size_t i = 0; i < comps.size(); ++i)
      for (int p : comps[i]) comp_of[p] = static_cast<int>(i);
    trail.note("C1 imprimitive via color " + std::to_string(r));
    return partition_by([](int) { return 0; }, [&](int a) { return comp_of[a]; });
  }

  // No twins in C1 with respect to C2; the color of an edge in C1 decides
  // twin status (checked against the direct computation on small inputs).
  {
    std::map<std::vector<int>, int> seen;
    for (int a : C1) {
      std::vector<int> key;
      for (int b : C2) key.push_back(col2(c, a, b));
      if (!seen.emplace(key, a).second) throw InternalError("twins in C1 with respect to C2");
    }
    if (n1 <= 60)
      for (int brown : cross) {
        std::map<int, int> status;
        for (int a : C1)
          for (int a2 : C1) {
            if (a == a2) continue;
            bool tw = true;
            for (int b : C2) tw = tw && ((col2(c, a, b) == brown) == (col2(c, a2, b) == brown));
            auto [it, fresh] = status.emplace(col2(c, a, a2), tw);
            if (!fresh && it->second != tw) throw InternalError("edge color does not decide twins");
          }
      }
  }

  std::map<int, int> degree;  // d_k: points of C1 joined to a fixed w in C2 by color k
  for (int a : C1) ++degree[col2(c, a, C2[0])];
  int violet = -1;
  for (auto [k, d] : degree)
    if (2 * d > n1) violet = k;

  auto twin_bound_ok = [](const std::vector<std::vector<char>>& adj, std::size_t rows) {
    std::map<std::vector<char>, std::size_t> cnt;
    std::size_t big = 0;
    for (const auto& r : adj) big = std::max(big, ++cnt[r]);
    return 2 * big <= rows;
  };

  std::vector<std::vector<int>> blocks;
  for (int r : colors_within(C2)) {
    auto comps = components(C2, r);
    if (comps.size() >= 2) {
      blocks = comps;
      trail.note("C2 imprimitive via color " + std::to_string(r));
      break;
    }
  }

  if (!blocks.empty()) {
    if (violet < 0) {
      std::size_t i = chooser.choose(C2.size(), "coherent SoJ point w");
      int w = C2[i];
      trail.choice(C2.size(), glob(global_of, w), "coherent SoJ point w");
      return partition_by([&](int a) { return col2(c, a, w); }, [](int) { return -1; });
    }
    std::vector<int> good_pts;
    std::vector<int> block_of(n, -1);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      for (int p : blocks[i]) block_of[p] = static_cast<int>(i);
      std::vector<std::vector<char>> adj;
      for (int a : C1) {
        std::vector<char> row;
        for (int b : blocks[i]) row.push_back(col2(c, a, b) == violet);
        adj.push_back(row);
      }
      if (twin_bound_ok(adj, C1.size()))
        good_pts.insert(good_pts.end(), blocks[i].begin(), blocks[i].end());
    }
    std::sort(good_pts.begin(), good_pts.end());
    res.is_partition = false;
    res.v1 = C1;
    if (!good_pts.empty()) {
      std::size_t i = chooser.choose(good_pts.size(), "coherent SoJ point y in a block");
      int y = good_pts[i];
      trail.choice(good_pts.size(), glob(global_of, y), "coherent SoJ point y in a block");
      const auto& blk = blocks[block_of[y]];
      for (int b : blk) res.v2.push_back({b});
      for (int a : C1) {
        std::vector<char> row;
        for (int b : blk) row.push_back(col2(c, a, b) == violet);
        res.adj.push_back(row);
      }
    } else {
      int green = -1;
      for (int k : cross)
        if (k != violet) {
          green = k;
          break;
        }
      res.v2 = blocks;
      for (int a : C1) {
        std::vector<char> row;
        for (const auto& blk : blocks) {
          bool hit = false;
          for (int b : blk) hit = hit || col2(c, a, b) == green;
          row.push_back(hit);
        }
        res.adj.push_back(row);
      }
      trail.note("contracted graph on " + std::to_string(blocks.size()) + " blocks");
    }
  } else {
    std::size_t i = chooser.choose(C2.size(), "coherent SoJ point y");
    int y = C2[i];
    trail.choice(C2.size(), glob(global_of, y), "coherent SoJ point y");
    if (violet < 0)
      return partition_by([&](int a) { return col2(c, a, y); }, [](int) { return -1; });
    int blue = -1;
    for (int r : colors_within(C2)) {
      int deg = 0;
      for (int w : C2) deg += w != y && col2(c, w, y) == r;
      if (deg >= 1 && 2 * deg < n2) {
        blue = r;
        break;
      }
    }
    if (blue < 0) throw InternalError("no color of degree below |C2|/2 in C2");
    res.is_partition = false;
    for (int a : C1)
      if (col2(c, a, y) == violet) res.v1.push_back(a);
    std::vector<int> v2;
    for (int w : C2)
      if (w != y && col2(c, w, y) == blue) v2.push_back(w);
    for (int w : v2) res.v2.push_back({w});
    for (int a : res.v1) {
      std::vector<char> row;
      for (int w : v2) row.push_back(col2(c, a, w) == violet);
      res.adj.push_back(row);
    }
  }
  if (2 * res.v1.size() < C1.size() || 2 * res.v2.size() > C2.size() ||
      !twin_bound_ok(res.adj, res.v1.size()))
    throw InternalError("coherent Split-or-Johnson produced an invalid reduction");
  return res;
}

SoJOutcome split_or_johnson(const Configuration& c, double alpha, Chooser& chooser,
                            const SoJParams& params) {
  if (alpha < 2.0 / 3.0 - 1e-12 || alpha >= 1) throw InputError("alpha must lie in [2/3, 1)");
  auto summary = classify_classical(c);
  if (!summary.uniprimitive) throw InputError("Split-or-Johnson needs a uniprimitive configuration");
  int n = c.gamma_size();
  auto all = iota_vec(n);
  SoJOutcome out;
  if (params.johnson_fast_path) {
    if (auto id = identify_johnson(c)) {
      out.variant = SoJOutcome::Variant::Johnson;
      out.partition = ColoredPartition::build(n, all, std::vector<Configuration::Description>(n, {0}),
                                              std::vector<int>(n, -1));
      out.gamma0 = all;
      out.johnson = *id;
      out.trail.note("input identified as J(" + std::to_string(id->m) + "," +
                     std::to_string(id->s) + ")");
      std::string why;
      if (!out.verify(alpha, &why)) throw InternalError("Johnson fast path: " + why);
      return out;
    }
  }
  std::size_t xi = chooser.choose(n, "base point x");
  int x = static_cast<int>(xi);
  out.trail.choice(n, x, "base point x");
  std::map<int, std::vector<int>> by;
  for (int y = 0; y < n; ++y) by[col2(c, x, y)].push_back(y);
  int aqua = -1;
  for (auto& [k, v] : by)
    if (v.size() > alpha * n) aqua = k;
  if (aqua < 0) {
    std::vector<Configuration::Description> d;
    for (int y = 0; y < n; ++y) d.push_back({col2(c, x, y)});
    out.partition = ColoredPartition::build(n, all, d, std::vector<int>(n, -1));
    std::string why;
    if (!out.verify(alpha, &why)) throw InternalError("Split-or-Johnson: " + why);
    return out;
  }
  const auto& v1 = by[aqua];
  std::pair<int, int> best{-1, -1};
  for (int y = 0; y < n; ++y) {
    int beige = col2(c, x, y);
    if (beige == aqua) continue;
    for (int z : v1) {
      int cyan = col2(c, z, y);
      if (cyan == aqua) continue;
      if (best.first < 0 || std::make_pair(beige, cyan) < best) best = {beige, cyan};
    }
  }
  if (best.first < 0) throw InternalError("complement of the dominant color is not of diameter 2");
  auto [beige, cyan] = best;
  Bip g;
  g.v1 = v1;
  for (int w : by[beige]) g.v2.push_back({w});
  for (int a : v1) {
    std::vector<char> row;
    for (int w : by[beige]) row.push_back(col2(c, a, w) == cyan);
    g.adj.push_back(row);
  }
  out.trail.note("bipartite graph: |V1| = " + std::to_string(v1.size()) + ", |V2| = " +
                 std::to_string(g.v2.size()));
  if (2 * max_size(row_twins(g, iota_vec(static_cast<int>(v1.size())),
                             iota_vec(static_cast<int>(g.v2.size())))) > v1.size())
    throw InternalError("semiregular graph with a twin class above |V1|/2");
  double beta = alpha * n / v1.size();
  Ladder ladder(v1, n, beta, chooser, params, out.trail);
  auto inner = ladder.run(g);
  out.trail = inner.trail;
  out.variant = inner.variant;
  out.johnson = inner.johnson;
  out.gamma0 = inner.gamma0;
  std::vector<Configuration::Description> d(n);
  std::vector<int> part(n, -1);
  for (int y = 0; y < n; ++y) {
    int col = inner.partition.color[y];
    if (col < 0) {
      d[y] = {0, col2(c, x, y)};
    } else {
      d[y] = {1};
      const auto& pd = inner.partition.palette[col];
      d[y].insert(d[y].end(), pd.begin(), pd.end());
      const auto& parts = inner.partition.cells[col];
      if (parts.size() > 1)
        for (std::size_t i = 0; i < parts.size(); ++i)
          if (std::binary_search(parts[i].begin(), parts[i].end(), y)) part[y] = static_cast<int>(i);
    }
  }
  out.partition = ColoredPartition::build(n, all, d, part);
  std::string why;
  if (!out.verify(alpha, &why)) throw InternalError("Split-or-Johnson: " + why);
  return out;
}

}  // namespace giso
