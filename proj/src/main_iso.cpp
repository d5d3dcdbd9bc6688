#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "giso/certificates.hpp"
#include "giso/errors.hpp"
#include "giso/schemes.hpp"
#include "giso/split_johnson.hpp"
#include "giso/string_iso.hpp"
#include "giso/wl.hpp"

namespace giso {

namespace {

std::vector<int> iota_vec(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

// An identified alternating quotient: blocks <-> k-subsets of Lambda.
struct Giant {
  int m = 0, k = 0;
  std::vector<std::vector<int>> iota;  // block -> sorted k-subset of Lambda
  GenSet images;                       // on Lambda, one per generator of H
  bool sym = false;
};

// A canonical object on Lambda. Cells come in canonical order; a cell with
// several parts may have its parts permuted. One cell may carry a Johnson
// structure, given by iota on the points of its single part.
struct Target {
  std::vector<std::vector<std::vector<int>>> cells;
  int johnson_cell = -1, jm = 0, js = 0;
  std::vector<std::vector<int>> jiota;
  std::uint64_t signature = 0;
  std::string branch;

  std::vector<std::int64_t> shape() const {
    std::vector<std::int64_t> s{static_cast<std::int64_t>(signature), johnson_cell, jm, js};
    for (const auto& c : cells) {
      s.push_back(-1);
      s.push_back(static_cast<std::int64_t>(c.size()));
      s.push_back(static_cast<std::int64_t>(c[0].size()));
    }
    return s;
  }
  std::vector<std::vector<int>> key() const {
    std::vector<std::vector<int>> k;
    for (const auto& c : cells) {
      auto parts = c;
      std::sort(parts.begin(), parts.end());
      for (auto& p : parts) k.push_back(p);
      k.push_back({-1});
    }
    for (const auto& j : jiota) k.push_back(j);
    return k;
  }
};

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

Permutation transposition(int n, int a, int b) { return Permutation::from_cycles(n, {{a, b}}); }

// Sym(points) inside Sym(n).
void add_sym(GenSet& out, const std::vector<int>& pts) {
  if (pts.size() < 2) return;
  int n = out.degree;
  out.gens.push_back(transposition(n, pts[0], pts[1]));
  if (pts.size() > 2) out.gens.push_back(Permutation::from_cycles(n, {pts}));
}

// Maps the i-th element of a onto the i-th element of b.
void map_sorted(std::vector<int>& img, std::vector<int> a, std::vector<int> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (std::size_t i = 0; i < a.size(); ++i) img[a[i]] = b[i];
}

GenSet stabilizer_gens(const Target& t, int m) {
  GenSet out(m);
  for (std::size_t c = 0; c < t.cells.size(); ++c) {
    const auto& parts = t.cells[c];
    if (static_cast<int>(c) == t.johnson_cell) {
      // Sym(Lambda'') acting through iota.
      const auto& pts = parts[0];
      std::map<std::vector<int>, int> where;
      for (std::size_t i = 0; i < pts.size(); ++i) where[t.jiota[i]] = pts[i];
      std::vector<int> cyc = iota_vec(t.jm);
      for (const auto& g : {Permutation::from_cycles(t.jm, {{0, 1}}),
                            Permutation::from_cycles(t.jm, {cyc})}) {
        std::vector<int> img = iota_vec(m);
        for (std::size_t i = 0; i < pts.size(); ++i) {
          std::vector<int> s;
          for (int l : t.jiota[i]) s.push_back(g[l]);
          std::sort(s.begin(), s.end());
          img[pts[i]] = where.at(s);
        }
        out.gens.emplace_back(img);
      }
      continue;
    }
    add_sym(out, parts[0]);
    if (parts.size() > 1) {
      std::vector<int> swap = iota_vec(m);
      for (std::size_t i = 0; i < parts[0].size(); ++i) {
        swap[parts[0][i]] = parts[1][i];
        swap[parts[1][i]] = parts[0][i];
      }
      out.gens.emplace_back(swap);
      if (parts.size() > 2) {
        std::vector<int> cyc = iota_vec(m);
        for (std::size_t j = 0; j < parts.size(); ++j)
          for (std::size_t i = 0; i < parts[j].size(); ++i)
            cyc[parts[j][i]] = parts[(j + 1) % parts.size()][i];
        out.gens.emplace_back(cyc);
      }
    }
  }
  return out;
}

// Some tau in Sym(Lambda) with O_x^tau = O_y; shapes must agree.
Permutation alignment(const Target& a, const Target& b, int m) {
  std::vector<int> img(m, -1);
  for (std::size_t c = 0; c < a.cells.size(); ++c) {
    if (static_cast<int>(c) == a.johnson_cell) {
      std::map<std::vector<int>, int> where;
      for (std::size_t i = 0; i < b.cells[c][0].size(); ++i) where[b.jiota[i]] = b.cells[c][0][i];
      for (std::size_t i = 0; i < a.cells[c][0].size(); ++i)
        img[a.cells[c][0][i]] = where.at(a.jiota[i]);
      continue;
    }
    for (std::size_t j = 0; j < a.cells[c].size(); ++j) map_sorted(img, a.cells[c][j], b.cells[c][j]);
  }
  return Permutation(img);
}

// S intersected with Alt, by Schreier generators over {e, s0}.
GenSet even_part(const GenSet& s, std::optional<Permutation>* odd = nullptr) {
  std::optional<Permutation> s0;
  for (const auto& g : s.gens)
    if (g.sign() < 0) {
      s0 = g;
      break;
    }
  if (odd) *odd = s0;
  if (!s0) return s;
  GenSet out(s.degree);
  Permutation inv = s0->inverse();
  for (const auto& g : s.gens) {
    if (g.sign() > 0) {
      out.gens.push_back(g);
      out.gens.push_back(*s0 * g * inv);
    } else {
      out.gens.push_back(g * inv);
      out.gens.push_back(*s0 * g);
    }
  }
  return out;
}

// Cells from a vertex coloring, after the given individualized points.
Target coloring_target(const std::vector<int>& color, const std::vector<int>& prefix) {
  Target t;
  std::vector<char> fixed(color.size(), 0);
  for (int p : prefix) {
    t.cells.push_back({{p}});
    fixed[p] = 1;
  }
  std::map<int, std::vector<int>> by;
  for (std::size_t p = 0; p < color.size(); ++p)
    if (!fixed[p]) by[color[p]].push_back(static_cast<int>(p));
  for (auto& [c, pts] : by) t.cells.push_back({pts});
  return t;
}

bool is_primitive(const Configuration& c) {
  int m = c.gamma_size();
  for (int col = 0; col < c.num_colors(); ++col) {
    bool off = false;
    for (int a = 0; a < m && !off; ++a)
      for (int b = 0; b < m && !off; ++b) off = a != b && c.color(Tuple{a, b}) == col;
    if (off && color_components(c, col).size() > 1) return false;
  }
  return true;
}

// The least off-diagonal color whose graph is disconnected; its components.
std::vector<std::vector<int>> canonical_blocks(const Configuration& c) {
  int m = c.gamma_size();
  for (int col = 0; col < c.num_colors(); ++col) {
    bool off = false;
    for (int a = 0; a < m && !off; ++a)
      for (int b = 0; b < m && !off; ++b) off = a != b && c.color(Tuple{a, b}) == col;
    if (!off) continue;
    auto comps = color_components(c, col);
    if (comps.size() > 1) return comps;
  }
  return {};
}

// P(x, chooser): a canonical object on Lambda built from the refined
// structure, or nullopt when the structure carries no information.
std::optional<Target> build_target(const Configuration& base, Chooser& chooser, SoJTrail& trail,
                                   double alpha) {
  int m = base.gamma_size();
  std::vector<int> vcol(m);
  for (int v = 0; v < m; ++v) vcol[v] = base.vertex_color(v);
  if (std::set<int>(vcol.begin(), vcol.end()).size() > 1) {
    Target t = coloring_target(vcol, {});
    t.signature = base.signature();
    t.branch = "alt_vertex_coloring";
    return t;
  }
  for (const auto& tc : twin_classes(base))
    if (2 * tc.size() > static_cast<std::size_t>(m)) {
      if (tc.size() == static_cast<std::size_t>(m)) return std::nullopt;
      std::vector<int> col(m, 1);
      for (int p : tc) col[p] = 0;
      Target t = coloring_target(col, {});
      t.signature = mix(base.signature(), 1);
      t.branch = "alt_twin_class";
      return t;
    }
  if (base.arity() < 2 || 2 * base.arity() > m) return std::nullopt;
  auto dl = design_lemma(base, alpha, chooser, trail);
  std::vector<int> col(m);
  for (int v = 0; v < m; ++v) col[v] = dl.coloring.vertex_color(v);
  std::uint64_t sig = mix(mix(base.signature(), dl.coloring.signature()), dl.prefix.size());
  if (dl.kind == DesignLemmaResult::Kind::NoDominant) {
    Target t = coloring_target(col, dl.prefix);
    t.signature = sig;
    t.branch = "alt_design_no_dominant";
    return t;
  }
  const auto& dom = dl.dominant_class;
  // Everything but the dominant class is colored as before; the dominant
  // class gets the finer structure.
  std::vector<int> rest_col = col;
  for (int p : dom) rest_col[p] = -1;
  Target t = coloring_target(rest_col, dl.prefix);
  t.cells.erase(std::remove_if(t.cells.begin(), t.cells.end(),
                               [&](const auto& c) {
                                 return std::binary_search(dom.begin(), dom.end(), c[0][0]);
                               }),
                t.cells.end());
  Configuration x = wl(dl.restricted);
  auto local = [&](const std::vector<int>& pts) {
    std::vector<int> out;
    for (int p : pts) out.push_back(dom[p]);
    return out;
  };
  int d = static_cast<int>(dom.size());
  std::vector<int> xv(d);
  for (int v = 0; v < d; ++v) xv[v] = x.vertex_color(v);
  sig = mix(sig, x.signature());
  if (std::set<int>(xv.begin(), xv.end()).size() > 1) {
    std::map<int, std::vector<int>> by;
    for (int v = 0; v < d; ++v) by[xv[v]].push_back(dom[v]);
    for (auto& [c, pts] : by) t.cells.push_back({pts});
    t.branch = "alt_design_refined";
  } else if (!is_primitive(x)) {
    auto comps = canonical_blocks(x);
    std::vector<std::vector<int>> parts;
    for (const auto& c : comps) parts.push_back(local(c));
    for (auto& p : parts) std::sort(p.begin(), p.end());
    t.cells.push_back(parts);
    t.branch = "alt_imprimitive_blocks";
  } else {
    auto soj = split_or_johnson(x, alpha, chooser);
    for (const auto& s : soj.trail.stabilized)
      if (s >= 0 && s < d) trail.choice(1, dom[s], "split-or-johnson point");
    trail.index_cost *= soj.trail.index_cost;
    sig = mix(sig, soj.signature());
    const auto& cp = soj.partition;
    for (std::size_t c = 0; c < cp.cells.size(); ++c) {
      std::vector<std::vector<int>> parts;
      for (const auto& p : cp.cells[c]) {
        auto q = local(p);
        std::sort(q.begin(), q.end());
        parts.push_back(q);
      }
      if (soj.variant == SoJOutcome::Variant::Johnson && parts.size() == 1 &&
          std::is_permutation(cp.cells[c][0].begin(), cp.cells[c][0].end(), soj.gamma0.begin(),
                              soj.gamma0.end()) &&
          cp.cells[c][0].size() == soj.gamma0.size()) {
        t.johnson_cell = static_cast<int>(t.cells.size());
        t.jm = soj.johnson->m;
        t.js = soj.johnson->s;
        // Order points as in gamma0 so that jiota stays parallel.
        parts = {local(soj.gamma0)};
        t.jiota = soj.johnson->iota;
      }
      t.cells.push_back(parts);
    }
    t.branch = soj.variant == SoJOutcome::Variant::Johnson ? "alt_soj_johnson" : "alt_soj_partition";
  }
  t.signature = sig;
  return t;
}

class MainSolver : public IsoSolver {
 public:
  using IsoSolver::IsoSolver;

  IsoCoset windowed(const PermGroup& group, const Permutation& sigma, const ColoredString& x,
                    const ColoredString& y, Window window) {
    std::sort(window.begin(), window.end());
    window.erase(std::unique(window.begin(), window.end()), window.end());
    return coset_shift(solve(group, window, x, pull_back(y, sigma)), sigma);
  }

 protected:
  IsoCoset transitive(const PermGroup& h, const Window& window, const ColoredString& x,
                      const ColoredString& y) override;

 private:
  std::optional<Giant> identify(const Quotient& q);
  std::pair<std::vector<int>, std::vector<int>> block_classes(
      const PermGroup& h, const Homomorphism& hom, const Giant& g, const Quotient& q,
      const ColoredString& x, const ColoredString& y);
  std::optional<IsoCoset> giant(const PermGroup& h, const Window& window, const Quotient& q,
                                const Giant& g, const ColoredString& x, const ColoredString& y);
  std::optional<IsoCoset> via_certificates(const PermGroup& h, const Window& window,
                                           const Homomorphism& hom, const Giant& g,
                                           const ColoredString& x, const ColoredString& y);
  IsoCoset pieces(const PermGroup& h, const Window& window, const Homomorphism& hom,
                  const Giant& g, const Target& tx, const std::vector<Target>& tys,
                  const ColoredString& x, const ColoredString& y);
  GenSet image_part(const Giant& g, const GenSet& s) const {
    return g.sym ? s : even_part(s);
  }
};

std::optional<Giant> MainSolver::identify(const Quotient& q) {
  int r = static_cast<int>(q.blocks.blocks.size());
  if (r < 5) return std::nullopt;
  if (q.order * 2 >= factorial(r)) {
    Giant g;
    g.m = r;
    g.k = 1;
    for (int b = 0; b < r; ++b) g.iota.push_back({b});
    g.images = q.action;
    g.sym = q.order == factorial(r);
    return g;
  }
  for (int k = 2; k <= 4; ++k)
    for (int m = 2 * k + 1; binomial(m, k) <= BigInt(r); ++m) {
      if (binomial(m, k) != BigInt(r)) continue;
      auto id = try_identify_alt_action(q.action, m, k);
      if (!id) continue;
      BigInt order = PermGroup(id->images).order();
      if (order * 2 < factorial(m)) continue;
      Giant g;
      g.m = m;
      g.k = k;
      g.iota = id->iota;
      g.images = id->images;
      g.sym = !id->images_even;
      return g;
    }
  return std::nullopt;
}

IsoCoset MainSolver::transitive(const PermGroup& h, const Window& window, const ColoredString& x,
                                const ColoredString& y) {
  Quotient q = quotient_for(h, window);
  if (!config_.use_alt) return enumerate_quotient(h, window, q, x, y);
  int r = static_cast<int>(q.blocks.blocks.size());
  int n = h.degree();
  bool within_cap = q.order <= BigInt(config_.enumeration_cap);
  // Small primitive quotient: |H/N| < r^{1 + log2 r}.
  double cameron = (1 + std::log2(double(r))) * std::log2(double(r));
  bool small_quotient = std::log2(q.order.convert_to<double>()) < cameron;
  if (within_cap && small_quotient && !config_.prefer_alt)
    return enumerate_quotient(h, window, q, x, y);
  auto g = identify(q);
  if (!g) return enumerate_quotient(h, window, q, x, y);
  int small_m = std::max(8, static_cast<int>(std::ceil(2 + std::log2(double(n)))));
  if (g->m <= small_m && within_cap && !config_.prefer_alt)
    return enumerate_quotient(h, window, q, x, y);
  note("alternating quotient: Alt(" + std::to_string(g->m) + ") on " + std::to_string(g->k) +
       "-subsets");
  if (auto c = giant(h, window, q, *g, x, y)) return *c;
  return enumerate_quotient(h, window, q, x, y);
}

std::pair<std::vector<int>, std::vector<int>> MainSolver::block_classes(
    const PermGroup& h, const Homomorphism& hom, const Giant& g, const Quotient& q,
    const ColoredString& x, const ColoredString& y) {
  int nb = static_cast<int>(q.blocks.blocks.size());
  std::vector<int> cx(nb), cy(nb);
  if (q.blocks.block_size == 1) {
    for (int b = 0; b < nb; ++b) {
      cx[b] = x[q.blocks.blocks[b][0]];
      cy[b] = y[q.blocks.blocks[b][0]];
    }
    return {cx, cy};
  }
  struct Rep {
    const ColoredString* s;
    int block;
    PermGroup stab;
    std::vector<int> letters;
  };
  std::vector<Rep> reps;
  auto letters = [&](const ColoredString& s, int b) {
    std::vector<int> l;
    for (int p : q.blocks.blocks[b]) l.push_back(s[p]);
    std::sort(l.begin(), l.end());
    return l;
  };
  auto classify = [&](const ColoredString& s, int b) {
    auto l = letters(s, b);
    for (std::size_t i = 0; i < reps.size(); ++i) {
      if (reps[i].letters != l) continue;
      // Some element of H carrying rep's block onto b, then Iso on the block.
      std::vector<int> img(g.m, -1);
      const auto& sa = g.iota[reps[i].block];
      const auto& sb = g.iota[b];
      std::vector<char> ua(g.m, 0), ub(g.m, 0);
      for (std::size_t j = 0; j < sa.size(); ++j) {
        img[sa[j]] = sb[j];
        ua[sa[j]] = 1;
        ub[sb[j]] = 1;
      }
      std::vector<int> ra, rb;
      for (int p = 0; p < g.m; ++p) {
        if (!ua[p]) ra.push_back(p);
        if (!ub[p]) rb.push_back(p);
      }
      for (std::size_t j = 0; j < ra.size(); ++j) img[ra[j]] = rb[j];
      Permutation tau(img);
      if (!g.sym && tau.sign() < 0)
        tau = tau * transposition(g.m, rb.size() >= 2 ? rb[0] : sb[0], rb.size() >= 2 ? rb[1] : sb[1]);
      Permutation sigma = hom.lift(tau);
      Window w = q.blocks.blocks[reps[i].block];
      if (!windowed(reps[i].stab, sigma, *reps[i].s, s, w).empty) return static_cast<int>(i);
    }
    // New class: its block stabilizer.
    const auto& sb = g.iota[b];
    std::vector<char> in(g.m, 0);
    for (int p : sb) in[p] = 1;
    std::vector<int> out;
    for (int p = 0; p < g.m; ++p)
      if (!in[p]) out.push_back(p);
    GenSet st(g.m);
    add_sym(st, sb);
    add_sym(st, out);
    PermGroup stab(hom.preimage(image_part(g, st)));
    reps.push_back(Rep{&s, b, std::move(stab), l});
    return static_cast<int>(reps.size() - 1);
  };
  for (int b = 0; b < nb; ++b) cx[b] = classify(x, b);
  for (int b = 0; b < nb; ++b) cy[b] = classify(y, b);
  (void)h;
  return {cx, cy};
}

IsoCoset MainSolver::pieces(const PermGroup& h, const Window& window, const Homomorphism& hom,
                            const Giant& g, const Target& tx, const std::vector<Target>& tys,
                            const ColoredString& x, const ColoredString& y) {
  std::optional<Permutation> odd;
  GenSet s = stabilizer_gens(tx, g.m);
  GenSet se = g.sym ? s : even_part(s, &odd);
  PermGroup hc(hom.preimage(se));
  CosetUnion u;
  std::size_t used = 0;
  for (const auto& ty : tys) {
    Permutation tau = alignment(tx, ty, g.m);
    if (!g.sym && tau.sign() < 0) {
      if (!odd) continue;
      tau = *odd * tau;
    }
    Permutation sigma = hom.lift(tau);
    ++used;
    u.add(windowed(hc, sigma, x, y, window));
  }
  budget_.coset_multiplier *= BigInt(static_cast<long long>(std::max<std::size_t>(used, 1)));
  (void)h;
  if (u.empty()) return IsoCoset::none();
  return u.result();
}

std::optional<IsoCoset> MainSolver::giant(const PermGroup& h, const Window& window,
                                          const Quotient& q, const Giant& g,
                                          const ColoredString& x, const ColoredString& y) {
  Homomorphism hom(h.generators(), g.images);
  if (g.k > 4 || std::pow(double(g.m), g.k) > 1e6) return std::nullopt;
  auto [cx, cy] = block_classes(h, hom, g, q, x, y);
  std::map<std::vector<int>, int> block_of;
  for (std::size_t b = 0; b < g.iota.size(); ++b) block_of[g.iota[b]] = static_cast<int>(b);
  auto structure = [&](const std::vector<int>& cls) {
    std::size_t count = dense_size(g.m, g.k);
    Configuration probe = Configuration::from_colors(g.m, g.k, std::vector<int>(count, 0));
    std::vector<Configuration::Description> d(count);
    for (std::size_t i = 0; i < count; ++i) {
      Tuple t = probe.tuple_at(i);
      auto s = t;
      std::sort(s.begin(), s.end());
      if (std::adjacent_find(s.begin(), s.end()) != s.end()) d[i] = {0};
      else d[i] = {1, cls[block_of.at(s)]};
    }
    return wl(f2_config(Configuration::from_descriptions(g.m, g.k, d)));
  };
  Configuration bx = structure(cx), by = structure(cy);
  if (bx.palette() != by.palette() || bx.class_sizes() != by.class_sizes()) {
    count("alt_refinement_mismatch");
    return IsoCoset::none();
  }
  const double alpha = config_.soj_alpha;
  SoJTrail trail;
  FirstChooser first;
  auto tx = build_target(bx, first, trail, alpha);
  if (!tx) return via_certificates(h, window, hom, g, x, y);
  count(tx->branch);
  note(tx->branch + ": " + std::to_string(tx->cells.size()) + " cells");
  budget_.stabilized_points += trail.stabilized.size();
  auto shape = tx->shape();
  std::vector<Target> tys;
  std::set<std::vector<std::vector<int>>> seen;
  for_each_choice_sequence(
      [&](Chooser& ch) {
        SoJTrail t2;
        auto ty = build_target(by, ch, t2, alpha);
        if (!ty || ty->shape() != shape || ty->branch != tx->branch) return;
        if (seen.insert(ty->key()).second) tys.push_back(*ty);
      },
      100000);
  note("matching objects for y: " + std::to_string(tys.size()));
  if (tys.empty()) return IsoCoset::none();
  return pieces(h, window, hom, g, *tx, tys, x, y);
}

std::optional<IsoCoset> MainSolver::via_certificates(const PermGroup& h, const Window& window,
                                                     const Homomorphism& hom, const Giant& g,
                                                     const ColoredString& x,
                                                     const ColoredString& y) {
  if (!config_.use_certificates) return std::nullopt;
  int n = h.degree();
  int k = config_.certificate_k;
  if (k <= 0)
    k = std::min(10, std::max(8, static_cast<int>(std::ceil(2 * std::log2(double(n))))));
  if (k >= g.m || binomial(g.m, k) > BigInt(static_cast<long long>(config_.certificate_subset_cap)))
    return std::nullopt;
  count("certificates");
  PhiMap phi(h.generators(), g.images);
  IsoSolverFn solver = [this](const PermGroup& grp, const Permutation& sigma,
                              const ColoredString& a, const ColoredString& b, const Window& w) {
    return windowed(grp, sigma, a, b, w);
  };
  int sigma = std::max(x.alphabet_size, y.alphabet_size);
  auto xp = pad_outside(x, window, sigma), yp = pad_outside(y, window, sigma);
  auto aggregate = [&](const ColoredString& s) {
    std::vector<Certificate> certs;
    for (const auto& T : k_subsets(g.m, k)) certs.push_back(local_certificate(phi, T, s, solver));
    FirstChooser ch;
    AggregateParams p;
    p.build_relation = false;
    p.tuple_cap = 0;
    try {
      return std::optional<AggregateOutcome>(aggregate_certificates(phi, s, certs, ch, solver, p));
    } catch (const ResourceError&) {
      return std::optional<AggregateOutcome>();  // case 3 beyond the tuple cap
    }
  };
  auto ax = aggregate(xp);
  if (!ax || ax->kind == AggregateOutcome::Case::TwoB || ax->kind == AggregateOutcome::Case::Three)
    return std::nullopt;
  if (ax->kind == AggregateOutcome::Case::TwoA &&
      static_cast<int>(ax->big_orbit.size()) == g.m) {
    // phi(F) contains Alt(Lambda) and F <= Aut(x): Iso = <F, Aut_K(x)> Iso_{K sigma}(x,y).
    count("certificates_alt_image");
    PermGroup kernel(hom.kernel());
    auto fmap = PhiMap::from_pairs(ax->f_pairs, g.m, n);
    GenSet fsrc = fmap.source();
    bool f_sym = false;
    for (const auto& p : fmap.images().gens) f_sym = f_sym || p.sign() < 0;
    std::vector<Permutation> shifts{Permutation(n)};
    if (g.sym && !f_sym) {
      for (const auto& p : g.images.gens)
        if (p.sign() < 0) {
          shifts.push_back(hom.lift(p));
          break;
        }
    }
    CosetUnion u;
    for (const auto& s : shifts) {
      IsoCoset c = windowed(kernel, s, x, y, window);
      if (c.empty) continue;
      GenSet gens = c.group.generators();
      for (const auto& f : fsrc.gens) gens.gens.push_back(f);
      u.add(IsoCoset::of(PermGroup(gens), c.rep));
    }
    if (u.empty()) return IsoCoset::none();
    return u.result();
  }
  auto ay = aggregate(yp);
  if (!ay || ay->kind != ax->kind) return IsoCoset::none();
  auto target = [&](const AggregateOutcome& a) {
    std::vector<int> col(g.m, 0);
    if (a.kind == AggregateOutcome::Case::One) col = a.orbit_length;
    else
      for (int p : a.big_orbit) col[p] = 1;
    Target t = coloring_target(col, {});
    t.branch = a.kind == AggregateOutcome::Case::One ? "certificates_orbit_lengths"
                                                     : "certificates_big_orbit";
    return t;
  };
  Target tx = target(*ax), ty = target(*ay);
  auto colors = [](const Target& t) {
    std::vector<int> s;
    for (const auto& c : t.cells) s.push_back(static_cast<int>(c[0].size()));
    return s;
  };
  if (colors(tx) != colors(ty)) return IsoCoset::none();
  if (ax->kind == AggregateOutcome::Case::One && ax->orbit_length != ay->orbit_length) {
    // Compare the orbit-length values of matching cells, not only sizes.
    std::vector<int> lx, ly;
    for (const auto& c : tx.cells) lx.push_back(ax->orbit_length[c[0][0]]);
    for (const auto& c : ty.cells) ly.push_back(ay->orbit_length[c[0][0]]);
    if (lx != ly) return IsoCoset::none();
  }
  count(tx.branch);
  return pieces(h, window, hom, g, tx, {ty}, x, y);
}

}  // namespace

IsoCoset main_iso_window(const PermGroup& group, const Permutation& sigma,
                         const ColoredString& x, const ColoredString& y, const Window& window,
                         const IsoConfig& config, RecursionBudget* budget) {
  int n = group.degree();
  if (x.size() != n || y.size() != n) throw InputError("string length differs from degree");
  std::vector<char> in(n, 0);
  for (int p : window) {
    if (p < 0 || p >= n) throw InputError("window point out of range");
    in[p] = 1;
  }
  for (const auto& g : group.generators().gens)
    for (int p : window)
      if (!in[g[p]]) throw InputError("window is not invariant under the group");
  MainSolver solver(config);
  IsoCoset c = solver.windowed(group, sigma, x, y, window);
  Window w = window;
  std::sort(w.begin(), w.end());
  w.erase(std::unique(w.begin(), w.end()), w.end());
  verify_coset(c, x, y, w);
  if (budget) *budget = solver.budget();
  return c;
}

IsoCoset main_string_iso(const GenSet& gens, const ColoredString& x, const ColoredString& y,
                         const IsoConfig& config, RecursionBudget* budget) {
  if (x.size() != gens.degree || y.size() != gens.degree)
    throw InputError("string length differs from degree");
  gens.check();
  return main_iso_window(PermGroup(gens), Permutation(gens.degree), x, y, iota_vec(gens.degree),
                         config, budget);
}

}  // namespace giso
