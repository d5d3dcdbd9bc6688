#include "giso/string_iso.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

#include "giso/errors.hpp"

namespace giso {

ColoredString::ColoredString(std::vector<int> l, int sigma)
    : letters(std::move(l)), alphabet_size(sigma) {
  for (int v : letters)
    if (v < 0 || v >= alphabet_size) throw InputError("letter outside the alphabet");
}

ColoredString act(const ColoredString& x, const Permutation& g) {
  ColoredString r = x;
  for (int p = 0; p < x.size(); ++p) r.letters[g[p]] = x.letters[p];
  return r;
}

ColoredString pull_back(const ColoredString& y, const Permutation& sigma) {
  ColoredString r = y;
  for (int q = 0; q < y.size(); ++q) r.letters[q] = y.letters[sigma[q]];
  return r;
}

ColoredString read_string(std::istream& in) {
  int n = -1, sigma = -1;
  std::string line;
  std::vector<int> letters;
  while (std::getline(in, line)) {
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    std::istringstream is(line);
    int v;
    while (is >> v) {
      if (n < 0) {
        n = v;
      } else if (sigma < 0) {
        sigma = v;
      } else {
        letters.push_back(v);
      }
    }
  }
  if (n < 0 || sigma < 0) throw InputError("string file needs 'n |Sigma|' header");
  if (static_cast<int>(letters.size()) != n)
    throw InputError("string file has " + std::to_string(letters.size()) +
                     " letters, expected " + std::to_string(n));
  return ColoredString(std::move(letters), sigma);
}

ColoredString read_string_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_string(in);
}

// ---------------------------------------------------------------------------
// Cosets

bool IsoCoset::contains(const Permutation& g) const {
  if (empty) return false;
  return group.contains(g * rep.inverse());
}

IsoCoset coset_shift(const IsoCoset& c, const Permutation& sigma) {
  if (c.empty) return c;
  if (sigma.degree() != c.rep.degree()) throw InputError("coset_shift: degree mismatch");
  return IsoCoset::of(c.group, c.rep * sigma);
}

void CosetUnion::add(const IsoCoset& c) {
  if (c.empty) return;
  if (!first_) {
    first_ = c;
    first_inv_ = c.rep.inverse();
    chain_ = c.group.chain();
    gens_ = c.group.generators();
    return;
  }
  Permutation t = c.rep * *first_inv_;
  if (chain_->extend(t)) gens_.gens.push_back(std::move(t));
}

IsoCoset CosetUnion::result() const {
  if (!first_) return IsoCoset::none();
  if (gens_.gens.size() == first_->group.generators().gens.size()) return *first_;
  return IsoCoset::of(PermGroup(gens_), first_->rep);
}

IsoCoset coset_union(const std::vector<IsoCoset>& cs) {
  const IsoCoset* base = nullptr;
  for (const auto& c : cs) {
    if (c.empty) continue;
    if (!base) {
      base = &c;
      continue;
    }
    if (c.group.order() != base->group.order())
      throw InputError("coset_union: pieces are cosets of different groups");
    for (const auto& g : c.group.generators().gens)
      if (!base->group.contains(g))
        throw InputError("coset_union: pieces are cosets of different groups");
  }
  CosetUnion u;
  for (const auto& c : cs) u.add(c);
  return u.result();
}

IsoConfig IsoConfig::from_env() {
  IsoConfig c;
  if (const char* v = std::getenv("GISO_NODE_CAP")) {
    try {
      c.node_cap = std::stoull(v);
    } catch (const std::exception&) {
      throw InputError("GISO_NODE_CAP is not a number");
    }
  }
  return c;
}

Window full_window(int n) {
  Window w(n);
  std::iota(w.begin(), w.end(), 0);
  return w;
}

void verify_coset(const IsoCoset& c, const ColoredString& x, const ColoredString& y,
                  const Window& window) {
  if (c.empty) return;
  for (int p : window)
    if (x[p] != y[c.rep[p]]) throw InternalError("coset representative is not an isomorphism");
  for (const auto& g : c.group.generators().gens)
    for (int p : window)
      if (x[p] != x[g[p]]) throw InternalError("coset generator is not an automorphism");
}

// ---------------------------------------------------------------------------
// Recursion

void IsoSolver::note(const std::string& msg) {
  if (config_.trace)
    budget_.trace.push_back(std::string(2 * budget_.depth, ' ') + msg);
}

namespace {

struct DepthGuard {
  RecursionBudget& b;
  explicit DepthGuard(RecursionBudget& budget) : b(budget) {
    ++b.depth;
    b.max_depth = std::max(b.max_depth, b.depth);
  }
  ~DepthGuard() { --b.depth; }
};

}  // namespace

IsoCoset IsoSolver::solve(const PermGroup& h, const Window& window,
                          const ColoredString& x, const ColoredString& y) {
  int n = h.degree();
  if (++budget_.node_counter > config_.node_cap)
    throw ResourceError("recursion node cap exceeded");
  if (budget_.depth >= config_.depth_cap) throw ResourceError("recursion depth cap exceeded");
  DepthGuard guard(budget_);
  if (window.empty()) return IsoCoset::of(h, Permutation(n));

  // Letter counts on the window must agree, since H preserves the window.
  int sigma = std::max(x.alphabet_size, y.alphabet_size);
  std::vector<int> cnt(sigma, 0);
  for (int p : window) {
    ++cnt[x[p]];
    --cnt[y[p]];
  }
  for (int c : cnt)
    if (c != 0) return IsoCoset::none();

  bool constant = true;
  for (int p : window) constant = constant && x[p] == x[window[0]];
  if (constant) return IsoCoset::of(h, Permutation(n));

  bool fixes_window = true;
  for (const auto& g : h.generators().gens)
    for (int p : window)
      if (g[p] != p) {
        fixes_window = false;
        break;
      }
  if (fixes_window) {
    for (int p : window)
      if (x[p] != y[p]) return IsoCoset::none();
    return IsoCoset::of(h, Permutation(n));
  }

  auto orbs = orbits_on(h.generators(), window);
  if (orbs.size() > 1) {
    count("chain_rule");
    std::stable_sort(orbs.begin(), orbs.end(),
                     [](const auto& a, const auto& b) { return a.size() < b.size(); });
    PermGroup cur = h;
    Permutation rep(n);
    ColoredString ycur = y;
    for (const auto& orb : orbs) {
      IsoCoset c = solve(cur, orb, x, ycur);
      if (c.empty) return c;
      cur = c.group;
      rep = c.rep * rep;
      ycur = pull_back(y, rep);
    }
    return IsoCoset::of(cur, rep);
  }
  return transitive(h, window, x, y);
}

IsoSolver::Quotient IsoSolver::quotient_for(const PermGroup& h, const Window& window) {
  const GenSet& gens = h.generators();
  Quotient best;
  auto systems = maximal_block_systems_on(gens, window);
  if (systems.empty()) {
    BlockSystem bs;
    bs.block_size = 1;
    bs.block_of.assign(h.degree(), -1);
    for (int p : window) {
      bs.block_of[p] = static_cast<int>(bs.blocks.size());
      bs.blocks.push_back({p});
    }
    best.blocks = std::move(bs);
    best.primitive = true;
    best.action = action_on_blocks(gens, best.blocks);
    best.image = PermGroup(best.action);
    best.order = best.image.order();
    return best;
  }
  bool have = false;
  for (auto& bs : systems) {
    GenSet act = action_on_blocks(gens, bs);
    PermGroup img(act);
    BigInt o = img.order();
    if (!have || o < best.order) {
      have = true;
      best.blocks = std::move(bs);
      best.action = std::move(act);
      best.image = std::move(img);
      best.order = o;
    }
  }
  return best;
}

IsoCoset IsoSolver::transitive(const PermGroup& h, const Window& window,
                               const ColoredString& x, const ColoredString& y) {
  Quotient q = quotient_for(h, window);
  return enumerate_quotient(h, window, q, x, y);
}

IsoCoset IsoSolver::enumerate_quotient(const PermGroup& h, const Window& window,
                                       const Quotient& q, const ColoredString& x,
                                       const ColoredString& y) {
  if (q.order > config_.enumeration_cap)
    throw ResourceError("quotient of order " + q.order.str() +
                        " exceeds the coset enumeration cap");
  count("enumerate");
  note("enumerate " + q.order.str() + " cosets on " + std::to_string(q.blocks.blocks.size()) +
       " blocks");
  Homomorphism hom(h.generators(), q.action);
  PermGroup kernel(hom.kernel());
  CosetUnion u;
  hom.for_each_lift([&](const Permutation& sigma) {
    IsoCoset piece = solve(kernel, window, x, pull_back(y, sigma));
    u.add(coset_shift(piece, sigma));
    return true;
  });
  return u.result();
}

// ---------------------------------------------------------------------------
// Entry points

IsoCoset iso_window(const PermGroup& group, const Permutation& sigma,
                    const ColoredString& x, const ColoredString& y,
                    const Window& window, const IsoConfig& config) {
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
  Window w = window;
  std::sort(w.begin(), w.end());
  w.erase(std::unique(w.begin(), w.end()), w.end());
  IsoSolver solver(config);
  IsoCoset c = coset_shift(solver.solve(group, w, x, pull_back(y, sigma)), sigma);
  verify_coset(c, x, y, w);
  return c;
}

IsoCoset luks_iso(const GenSet& gens, const ColoredString& x, const ColoredString& y,
                  int /*factor_bound*/, const IsoConfig& config) {
  if (x.size() != gens.degree || y.size() != gens.degree)
    throw InputError("string length differs from degree");
  IsoSolver solver(config);
  Window w = full_window(gens.degree);
  IsoCoset c = solver.solve(PermGroup(gens), w, x, y);
  verify_coset(c, x, y, w);
  return c;
}

std::optional<Permutation> align(const std::vector<int>& x_class,
                                 const std::vector<int>& y_class,
                                 const PermGroup& group) {
  if (x_class.size() != y_class.size()) return std::nullopt;
  int n = group.degree();
  std::vector<char> in_x(n, 0), in_y(n, 0);
  for (int p : x_class) in_x[p] = 1;
  for (int p : y_class) in_y[p] = 1;
  std::vector<int> xs, ys, xr, yr;
  for (int p = 0; p < n; ++p) {
    (in_x[p] ? xs : xr).push_back(p);
    (in_y[p] ? ys : yr).push_back(p);
  }
  // g sends y's class onto x's class.
  std::vector<int> img(n);
  for (std::size_t i = 0; i < ys.size(); ++i) img[ys[i]] = xs[i];
  for (std::size_t i = 0; i < yr.size(); ++i) img[yr[i]] = xr[i];
  Permutation g(img);
  if (group.contains(g)) return g;
  // Parity repair inside one side, for groups containing Alt.
  auto fix = [&](const std::vector<int>& side) -> std::optional<Permutation> {
    if (side.size() < 2) return std::nullopt;
    Permutation t = g * Permutation::from_cycles(n, {{side[0], side[1]}});
    if (group.contains(t)) return t;
    return std::nullopt;
  };
  if (auto t = fix(xs)) return t;
  if (auto t = fix(xr)) return t;
  return std::nullopt;
}

}  // namespace giso
