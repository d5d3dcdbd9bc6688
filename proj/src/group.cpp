#include "giso/group.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "giso/errors.hpp"

namespace giso {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent[b] = a;
    return true;
  }
};

std::vector<int> make_base(int n, const std::vector<int>& hint) {
  std::vector<int> base;
  std::vector<char> used(n, 0);
  for (int p : hint) {
    if (p < 0 || p >= n) throw InputError("base point out of range");
    if (!used[p]) {
      used[p] = 1;
      base.push_back(p);
    }
  }
  for (int p = 0; p < n; ++p)
    if (!used[p]) base.push_back(p);
  return base;
}

}  // namespace

// ---------------------------------------------------------------------------
// StabilizerChain

StabilizerChain::StabilizerChain(const GenSet& gens,
                                 const std::vector<int>& base_hint)
    : degree_(gens.degree), base_(make_base(gens.degree, base_hint)),
      identity_(gens.degree) {
  gens.check();
  levels_.resize(std::max(degree_ - 1, 0));
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    levels_[i].reps = {-1};
    levels_[i].inverses = {-1};
    levels_[i].slot.assign(degree_, -1);
    levels_[i].slot[base_[i]] = 0;
  }
  std::deque<std::pair<int, int>> queue;
  for (const auto& g : gens.gens) {
    pool_.push_back(g);
    queue.emplace_back(static_cast<int>(pool_.size()) - 1, -1);
  }
  add_and_close(queue);
}

const Permutation& StabilizerChain::element(int idx) const {
  return idx < 0 ? identity_ : pool_[idx];
}

int StabilizerChain::filter(Permutation& gamma) const {
  std::vector<int> img = gamma.images();
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const Level& lv = levels_[i];
    int s = lv.slot[img[base_[i]]];
    if (s < 0) {
      gamma = Permutation(std::move(img));
      return static_cast<int>(i);
    }
    if (s > 0) {
      const auto& inv = pool_[lv.inverses[s]].images();
      for (auto& v : img) v = inv[v];
    }
  }
  gamma = identity_;
  return static_cast<int>(levels_.size());
}

void StabilizerChain::add_and_close(std::deque<std::pair<int, int>>& queue) {
  while (!queue.empty()) {
    auto [a, b] = queue.front();
    queue.pop_front();
    Permutation gamma = b < 0 ? element(a) : element(a) * element(b);
    int i = filter(gamma);
    if (i >= levels()) continue;
    Level& lv = levels_[i];
    int img = gamma[base_[i]];
    pool_.push_back(gamma.inverse());
    int inv_idx = static_cast<int>(pool_.size()) - 1;
    pool_.push_back(std::move(gamma));
    int g_idx = static_cast<int>(pool_.size()) - 1;
    lv.slot[img] = static_cast<int>(lv.reps.size());
    lv.reps.push_back(g_idx);
    lv.inverses.push_back(inv_idx);
    // Closure step: C_j*gamma for j <= i and gamma*C_j for j >= i, products
    // read left to right.
    for (int j = 0; j <= i; ++j)
      for (int h : levels_[j].reps)
        if (h >= 0) queue.emplace_back(h, g_idx);
    for (int j = i; j < levels(); ++j)
      for (int h : levels_[j].reps)
        if (h >= 0) queue.emplace_back(g_idx, h);
  }
}

StabilizerChain::Sift StabilizerChain::sift(const Permutation& g) const {
  if (g.degree() != degree_) throw InputError("degree mismatch in sift");
  Permutation gamma = g;
  int level = filter(gamma);
  if (degree_ <= 1) level = levels();
  return {level, gamma};
}

bool StabilizerChain::contains(const Permutation& g) const {
  if (g.degree() != degree_) return false;
  Permutation gamma = g;
  return filter(gamma) == levels();
}

bool StabilizerChain::extend(const Permutation& g) {
  if (g.degree() != degree_) throw InputError("degree mismatch in extend");
  if (contains(g)) return false;
  pool_.push_back(g);
  std::deque<std::pair<int, int>> queue;
  queue.emplace_back(static_cast<int>(pool_.size()) - 1, -1);
  add_and_close(queue);
  return true;
}

BigInt StabilizerChain::order() const {
  BigInt o = 1;
  for (const auto& lv : levels_) o *= static_cast<unsigned>(lv.reps.size());
  return o;
}

std::vector<int> StabilizerChain::transversal_sizes() const {
  std::vector<int> out;
  for (const auto& lv : levels_) out.push_back(static_cast<int>(lv.reps.size()));
  return out;
}

std::vector<Permutation> StabilizerChain::transversal(int level) const {
  std::vector<Permutation> out;
  for (int idx : levels_.at(level).reps) out.push_back(element(idx));
  return out;
}

const Permutation* StabilizerChain::rep_for(int level, int point) const {
  int s = levels_[level].slot[point];
  return s < 0 ? nullptr : &element(levels_[level].reps[s]);
}

const Permutation* StabilizerChain::rep_inverse_for(int level, int point) const {
  int s = levels_[level].slot[point];
  return s < 0 ? nullptr : &element(levels_[level].inverses[s]);
}

std::vector<Permutation> StabilizerChain::strong_generators(int from_level) const {
  std::vector<Permutation> out;
  for (int j = std::max(from_level, 0); j < levels(); ++j)
    for (int idx : levels_[j].reps)
      if (idx >= 0) out.push_back(pool_[idx]);
  return out;
}

void StabilizerChain::for_each_element(
    const std::function<bool(const Permutation&)>& fn) const {
  std::vector<int> nontrivial;
  for (int i = levels() - 1; i >= 0; --i)
    if (levels_[i].reps.size() > 1) nontrivial.push_back(i);
  // g = h_{L-1} * ... * h_0, built from the highest level down.
  bool stop = false;
  std::function<void(std::size_t, const Permutation&)> rec =
      [&](std::size_t pos, const Permutation& prefix) {
        if (stop) return;
        if (pos == nontrivial.size()) {
          if (!fn(prefix)) stop = true;
          return;
        }
        for (int idx : levels_[nontrivial[pos]].reps) {
          rec(pos + 1, idx < 0 ? prefix : prefix * pool_[idx]);
          if (stop) return;
        }
      };
  rec(0, identity_);
}

// ---------------------------------------------------------------------------
// PermGroup

PermGroup::PermGroup(const GenSet& gens, const std::vector<int>& base_hint)
    : gens_(gens.degree) {
  gens.check();
  auto chain = std::make_shared<StabilizerChain>(GenSet(gens.degree), base_hint);
  for (const auto& g : gens.gens)
    if (chain->extend(g)) gens_.gens.push_back(g);
  chain_ = std::move(chain);
}

PermGroup PermGroup::symmetric(const std::vector<int>& points, int degree) {
  GenSet gs(degree);
  if (points.size() >= 2) {
    gs.gens.push_back(Permutation::from_cycles(degree, {{points[0], points[1]}}));
    if (points.size() >= 3) gs.gens.push_back(Permutation::from_cycles(degree, {points}));
  }
  return PermGroup(gs);
}

std::vector<Permutation> PermGroup::elements(std::size_t limit) const {
  if (order() > limit) throw ResourceError("group too large to enumerate");
  std::vector<Permutation> out;
  chain_->for_each_element([&](const Permutation& g) {
    out.push_back(g);
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Orbits and blocks

std::vector<std::vector<int>> orbits(const GenSet& gens) {
  std::vector<int> all(gens.degree);
  std::iota(all.begin(), all.end(), 0);
  return orbits_on(gens, all);
}

std::vector<std::vector<int>> orbits_on(const GenSet& gens,
                                        const std::vector<int>& domain) {
  UnionFind uf(gens.degree);
  for (const auto& g : gens.gens)
    for (int p : domain) uf.unite(p, g[p]);
  std::map<int, std::vector<int>> cells;
  for (int p : domain) cells[uf.find(p)].push_back(p);
  std::vector<std::vector<int>> out;
  for (auto& [root, cell] : cells) {
    std::sort(cell.begin(), cell.end());
    out.push_back(std::move(cell));
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

BlockSystem system_from_uf(UnionFind& uf, const std::vector<int>& domain, int n) {
  std::map<int, std::vector<int>> cells;
  for (int p : domain) cells[uf.find(p)].push_back(p);
  BlockSystem bs;
  for (auto& [root, cell] : cells) {
    std::sort(cell.begin(), cell.end());
    bs.blocks.push_back(std::move(cell));
  }
  std::sort(bs.blocks.begin(), bs.blocks.end());
  bs.block_size = bs.blocks.empty() ? 0 : static_cast<int>(bs.blocks[0].size());
  bs.block_of.assign(n, -1);
  for (std::size_t i = 0; i < bs.blocks.size(); ++i)
    for (int p : bs.blocks[i]) bs.block_of[p] = static_cast<int>(i);
  return bs;
}

BlockSystem merge_systems(const BlockSystem& fine, const BlockSystem& coarse_on_blocks,
                          int n) {
  UnionFind uf(n);
  std::vector<int> domain;
  for (const auto& b : fine.blocks)
    for (int p : b) domain.push_back(p);
  for (const auto& cb : coarse_on_blocks.blocks)
    for (int bi : cb) uf.unite(fine.blocks[cb[0]][0], fine.blocks[bi][0]);
  for (const auto& b : fine.blocks)
    for (int p : b) uf.unite(b[0], p);
  return system_from_uf(uf, domain, n);
}

void check_transitive(const GenSet& gens, const std::vector<int>& domain) {
  if (orbits_on(gens, domain).size() > 1)
    throw InputError("block systems need a transitive action");
}

// Coarsen a system until the action on its blocks is primitive.
BlockSystem coarsen_to_primitive(const GenSet& gens, BlockSystem bs) {
  for (;;) {
    GenSet q = action_on_blocks(gens, bs);
    auto sub = minimal_block_system(q);
    if (!sub) return bs;
    bs = merge_systems(bs, *sub, gens.degree);
  }
}

}  // namespace

BlockSystem block_system_containing(const GenSet& gens,
                                    const std::vector<int>& domain, int a, int b) {
  UnionFind uf(gens.degree);
  std::deque<std::pair<int, int>> queue;
  if (uf.unite(a, b)) queue.emplace_back(a, b);
  while (!queue.empty()) {
    auto [u, v] = queue.front();
    queue.pop_front();
    for (const auto& g : gens.gens) {
      int gu = g[u], gv = g[v];
      if (uf.unite(gu, gv)) queue.emplace_back(gu, gv);
    }
  }
  return system_from_uf(uf, domain, gens.degree);
}

std::optional<BlockSystem> minimal_block_system_on(const GenSet& gens,
                                                   const std::vector<int>& domain) {
  check_transitive(gens, domain);
  if (domain.size() <= 2) return std::nullopt;
  int a = domain[0];
  for (std::size_t j = 1; j < domain.size(); ++j) {
    BlockSystem bs = block_system_containing(gens, domain, a, domain[j]);
    if (bs.blocks.size() > 1) return coarsen_to_primitive(gens, std::move(bs));
  }
  return std::nullopt;
}

std::optional<BlockSystem> minimal_block_system(const GenSet& gens) {
  std::vector<int> all(gens.degree);
  std::iota(all.begin(), all.end(), 0);
  return minimal_block_system_on(gens, all);
}

std::vector<BlockSystem> maximal_block_systems_on(const GenSet& gens,
                                                  const std::vector<int>& domain) {
  check_transitive(gens, domain);
  std::vector<BlockSystem> out;
  if (domain.size() <= 2) return out;
  std::set<std::vector<std::vector<int>>> seen;
  int a = domain[0];
  for (std::size_t j = 1; j < domain.size(); ++j) {
    BlockSystem bs = block_system_containing(gens, domain, a, domain[j]);
    if (bs.blocks.size() <= 1) continue;
    bs = coarsen_to_primitive(gens, std::move(bs));
    if (seen.insert(bs.blocks).second) out.push_back(std::move(bs));
  }
  return out;
}

bool is_block_system(const GenSet& gens, const BlockSystem& bs) {
  for (const auto& g : gens.gens)
    for (const auto& b : bs.blocks) {
      int target = bs.block_of[g[b[0]]];
      if (target < 0) return false;
      for (int p : b)
        if (bs.block_of[g[p]] != target) return false;
    }
  for (const auto& b : bs.blocks)
    if (static_cast<int>(b.size()) != bs.block_size) return false;
  return true;
}

GenSet action_on_blocks(const GenSet& gens, const BlockSystem& bs) {
  int r = static_cast<int>(bs.blocks.size());
  GenSet out(r);
  for (const auto& g : gens.gens) {
    std::vector<int> img(r);
    for (int i = 0; i < r; ++i) img[i] = bs.block_of[g[bs.blocks[i][0]]];
    out.gens.emplace_back(std::move(img));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stabilizers and subgroups

GenSet pointwise_stabilizer(const StabilizerChain& chain,
                            const std::vector<int>& points) {
  std::vector<int> uniq;
  for (int p : points)
    if (std::find(uniq.begin(), uniq.end(), p) == uniq.end()) uniq.push_back(p);
  int n = chain.degree();
  if (uniq.empty()) return GenSet(n, chain.strong_generators());
  bool prefix = uniq.size() <= chain.base().size() &&
                std::equal(uniq.begin(), uniq.end(), chain.base().begin());
  if (prefix)
    return PermGroup(GenSet(n, chain.strong_generators(static_cast<int>(uniq.size()))))
        .generators();
  StabilizerChain rebased(GenSet(n, chain.strong_generators()), uniq);
  return PermGroup(GenSet(n, rebased.strong_generators(static_cast<int>(uniq.size()))))
      .generators();
}

GenSet pointwise_stabilizer(const PermGroup& g, const std::vector<int>& points) {
  if (points.empty()) return g.generators();
  return pointwise_stabilizer(g.chain(), points);
}

GenSet subgroup_by_test(const PermGroup& g,
                        const std::function<bool(const Permutation&)>& test,
                        std::size_t index_bound) {
  int n = g.degree();
  const auto& gens = g.generators().gens;
  std::vector<Permutation> reps{Permutation(n)};
  std::vector<Permutation> rep_inv{Permutation(n)};
  // Index of the right coset H*t among the known representatives.
  auto locate = [&](const Permutation& t) -> int {
    for (std::size_t i = 0; i < reps.size(); ++i)
      if (test(t * rep_inv[i])) return static_cast<int>(i);
    return -1;
  };
  for (std::size_t i = 0; i < reps.size(); ++i) {
    for (const auto& s : gens) {
      Permutation t = reps[i] * s;
      if (locate(t) >= 0) continue;
      if (reps.size() >= index_bound)
        throw InputError("subgroup index exceeds the declared bound");
      rep_inv.push_back(t.inverse());
      reps.push_back(std::move(t));
    }
  }
  StabilizerChain h{GenSet(n)};
  GenSet out(n);
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (const auto& s : gens) {
      Permutation t = reps[i] * s;
      int j = locate(t);
      if (j < 0) throw InternalError("coset enumeration incomplete");
      Permutation sg = t * rep_inv[j];
      if (h.extend(sg)) out.gens.push_back(std::move(sg));
    }
  return out;
}

GenSet setwise_stabilizer_smallk(const PermGroup& g, const std::vector<int>& set,
                                 int k_max) {
  int n = g.degree();
  std::vector<char> in(n, 0);
  for (int p : set) {
    if (p < 0 || p >= n) throw InputError("set point out of range");
    in[p] = 1;
  }
  std::vector<int> key;
  int k = static_cast<int>(std::count(in.begin(), in.end(), 1));
  // The complement has the same stabilizer.
  bool use_complement = n - k < k;
  for (int p = 0; p < n; ++p)
    if (static_cast<bool>(in[p]) != use_complement) key.push_back(p);
  if (static_cast<int>(key.size()) > k_max)
    throw InputError("set size exceeds k_max for setwise stabilizer");
  if (key.empty()) return g.generators();
  const auto& gens = g.generators().gens;
  auto image = [](const std::vector<int>& s, const Permutation& p) {
    std::vector<int> r;
    r.reserve(s.size());
    for (int v : s) r.push_back(p[v]);
    std::sort(r.begin(), r.end());
    return r;
  };
  std::map<std::vector<int>, Permutation> rep;
  std::vector<std::vector<int>> order{key};
  rep.emplace(key, Permutation(n));
  for (std::size_t i = 0; i < order.size(); ++i)
    for (const auto& s : gens) {
      auto t = image(order[i], s);
      if (!rep.count(t)) {
        rep.emplace(t, rep.at(order[i]) * s);
        order.push_back(t);
      }
    }
  StabilizerChain h{GenSet(n)};
  GenSet out(n);
  for (const auto& u : order)
    for (const auto& s : gens) {
      Permutation sg = rep.at(u) * s * rep.at(image(u, s)).inverse();
      if (h.extend(sg)) out.gens.push_back(std::move(sg));
    }
  return out;
}

// ---------------------------------------------------------------------------
// Homomorphism

namespace {

Permutation pair_perm(const Permutation& img, const Permutation& src) {
  int a = img.degree(), b = src.degree();
  std::vector<int> v(a + b);
  for (int i = 0; i < a; ++i) v[i] = img[i];
  for (int i = 0; i < b; ++i) v[a + i] = a + src[i];
  return Permutation(std::move(v));
}

}  // namespace

Homomorphism::Homomorphism(const GenSet& source, const GenSet& images)
    : n_src_(source.degree), n_img_(images.degree) {
  if (source.gens.size() != images.gens.size())
    throw InputError("homomorphism needs one image per generator");
  source.check();
  images.check();
  GenSet mixed(n_src_ + n_img_);
  for (std::size_t i = 0; i < source.gens.size(); ++i)
    mixed.gens.push_back(pair_perm(images.gens[i], source.gens[i]));
  std::vector<int> hint(n_img_);
  std::iota(hint.begin(), hint.end(), 0);
  chain_ = StabilizerChain(mixed, hint);
}

bool Homomorphism::image_contains(const Permutation& q) const {
  try {
    lift(q);
    return true;
  } catch (const InputError&) {
    return false;
  }
}

Permutation Homomorphism::lift(const Permutation& q) const {
  if (q.degree() != n_img_) throw InputError("lift: degree mismatch");
  Permutation gamma = pair_perm(q, Permutation(n_src_));
  int top = std::max(n_img_ - 1, 0);
  for (int i = 0; i < top; ++i) {
    int b = chain_.base()[i];
    const Permutation* inv = chain_.rep_inverse_for(i, gamma[b]);
    if (!inv) throw InputError("permutation is not in the image");
    gamma = gamma * *inv;
  }
  for (int i = 0; i < n_img_; ++i)
    if (gamma[i] != i) throw InputError("permutation is not in the image");
  std::vector<int> v(n_src_);
  Permutation ginv = gamma.inverse();
  for (int i = 0; i < n_src_; ++i) v[i] = ginv[n_img_ + i] - n_img_;
  return Permutation(std::move(v));
}

GenSet Homomorphism::kernel() const {
  GenSet out(n_src_);
  StabilizerChain h{GenSet(n_src_)};
  for (const auto& k : chain_.strong_generators(std::max(n_img_ - 1, 0))) {
    std::vector<int> v(n_src_);
    for (int i = 0; i < n_src_; ++i) v[i] = k[n_img_ + i] - n_img_;
    Permutation p(std::move(v));
    if (h.extend(p)) out.gens.push_back(std::move(p));
  }
  return out;
}

PermGroup Homomorphism::image() const {
  GenSet out(n_img_);
  for (const auto& k : chain_.strong_generators(0)) {
    std::vector<int> v(k.images().begin(), k.images().begin() + n_img_);
    out.gens.emplace_back(std::move(v));
  }
  return PermGroup(out);
}

void Homomorphism::for_each_lift(
    const std::function<bool(const Permutation&)>& fn) const {
  std::vector<std::vector<Permutation>> levels;
  for (int i = std::max(n_img_ - 2, 0); i >= 0 && n_img_ >= 2; --i) {
    auto t = chain_.transversal(i);
    if (t.size() > 1) levels.push_back(std::move(t));
  }
  bool stop = false;
  std::function<void(std::size_t, const Permutation&)> rec =
      [&](std::size_t pos, const Permutation& prefix) {
        if (stop) return;
        if (pos == levels.size()) {
          std::vector<int> v(n_src_);
          for (int i = 0; i < n_src_; ++i) v[i] = prefix[n_img_ + i] - n_img_;
          if (!fn(Permutation(std::move(v)))) stop = true;
          return;
        }
        for (const auto& h : levels[pos]) {
          rec(pos + 1, prefix * h);
          if (stop) return;
        }
      };
  rec(0, Permutation(n_img_ + n_src_));
}

GenSet Homomorphism::preimage(const GenSet& target) const {
  if (target.degree != n_img_) throw InputError("preimage: degree mismatch");
  GenSet all = kernel();
  for (const auto& t : target.gens) all.gens.push_back(lift(t));
  return PermGroup(all).generators();
}

GenSet preimage_of_subgroup(const GenSet& gens, const GenSet& images,
                            const GenSet& target) {
  return Homomorphism(gens, images).preimage(target);
}

// ---------------------------------------------------------------------------
// I/O

GenSet read_generators(std::istream& in) {
  std::string line;
  int degree = -1;
  GenSet out;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      if (degree < 0) {
        std::istringstream is(line);
        std::string word;
        if (!(is >> word >> degree) || word != "degree" || degree < 0)
          throw InputError("expected 'degree n'");
        out = GenSet(degree);
        continue;
      }
      out.gens.push_back(parse_permutation(line, degree));
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (degree < 0) throw InputError("missing 'degree n' header");
  return out;
}

GenSet read_generators_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_generators(in);
}

void write_generators(std::ostream& out, const GenSet& gens) {
  out << "degree " << gens.degree << "\n";
  for (const auto& g : gens.gens) out << g.str() << "\n";
}

BigInt factorial(int n) {
  BigInt r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace giso
