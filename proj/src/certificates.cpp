#include "giso/certificates.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "giso/errors.hpp"
#include "giso/schemes.hpp"

namespace giso {

Permutation pair_perm(const Permutation& image, const Permutation& g) {
  int m = image.degree(), n = g.degree();
  std::vector<int> v(m + n);
  for (int i = 0; i < m; ++i) v[i] = image[i];
  for (int j = 0; j < n; ++j) v[m + j] = m + g[j];
  return Permutation(std::move(v));
}

namespace {

Permutation source_part(const Permutation& p, int m) {
  std::vector<int> v(p.degree() - m);
  for (int j = 0; j < static_cast<int>(v.size()); ++j) v[j] = p[m + j] - m;
  return Permutation(std::move(v));
}

Permutation image_part(const Permutation& p, int m) {
  return Permutation(std::vector<int>(p.images().begin(), p.images().begin() + m));
}

std::vector<int> iota_vec(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

// Generators (on Gamma) restricted to T, relabelled by position in T.
std::optional<GenSet> restrict_images(const GenSet& gens, const std::vector<int>& T) {
  std::vector<int> index_of(gens.degree, -1);
  for (std::size_t i = 0; i < T.size(); ++i) index_of[T[i]] = static_cast<int>(i);
  GenSet out(static_cast<int>(T.size()));
  for (const auto& g : gens.gens) {
    for (int p : T)
      if (index_of[g[p]] < 0) return std::nullopt;
    out.gens.push_back(restrict_to(g, T, index_of));
  }
  return out;
}

BigInt half_factorial(int k) { return k <= 1 ? BigInt(1) : factorial(k) / 2; }

bool fixes_string(const Permutation& g, const ColoredString& x) {
  for (int p = 0; p < x.size(); ++p)
    if (x[g[p]] != x[p]) return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------

PhiMap::PhiMap(const GenSet& gens, const GenSet& images) : m_(images.degree), n_(gens.degree) {
  if (gens.gens.size() != images.gens.size())
    throw InputError("phi needs one image per generator");
  gens.check();
  images.check();
  pairs_ = GenSet(m_ + n_);
  for (std::size_t i = 0; i < gens.gens.size(); ++i)
    pairs_.gens.push_back(pair_perm(images.gens[i], gens.gens[i]));
  std::vector<int> hint;
  for (int j = 0; j < n_; ++j) hint.push_back(m_ + j);
  source_chain_ = std::make_shared<const StabilizerChain>(pairs_, hint);
  // phi must be a function: no pair (q, e) with q nontrivial.
  for (int i = 0; i < source_chain_->levels(); ++i)
    if (source_chain_->base()[i] < m_ && source_chain_->transversal(i).size() > 1)
      throw InputError("generator images do not define a homomorphism");
}

PhiMap PhiMap::from_pairs(const GenSet& pairs, int gamma_size, int omega_size) {
  GenSet gens(omega_size), images(gamma_size);
  for (const auto& p : pairs.gens) {
    gens.gens.push_back(source_part(p, gamma_size));
    images.gens.push_back(image_part(p, gamma_size));
  }
  return PhiMap(gens, images);
}

GenSet PhiMap::source() const {
  GenSet out(n_);
  for (const auto& p : pairs_.gens) out.gens.push_back(source_part(p, m_));
  return out;
}

GenSet PhiMap::images() const {
  GenSet out(m_);
  for (const auto& p : pairs_.gens) out.gens.push_back(image_part(p, m_));
  return out;
}

Permutation PhiMap::image_of(const Permutation& g) const {
  if (g.degree() != n_) throw InputError("image_of: degree mismatch");
  Permutation gamma = pair_perm(Permutation(m_), g);
  for (int i = 0; i < source_chain_->levels(); ++i) {
    int b = source_chain_->base()[i];
    if (b < m_) break;
    const Permutation* inv = source_chain_->rep_inverse_for(i, gamma[b]);
    if (!inv) throw InputError("element is not in the source group");
    gamma = gamma * *inv;
  }
  for (int j = 0; j < n_; ++j)
    if (gamma[m_ + j] != m_ + j) throw InputError("element is not in the source group");
  return image_part(gamma, m_).inverse();
}

PhiMap PhiMap::restrict_to_subgroup(const GenSet& sub) const {
  GenSet images(m_);
  for (const auto& g : sub.gens) images.gens.push_back(image_of(g));
  return PhiMap(sub, images);
}

bool contains_alt_on(const GenSet& gens, const std::vector<int>& T) {
  int k = static_cast<int>(T.size());
  auto r = restrict_images(gens, T);
  if (!r) throw InputError("set is not invariant under the group");
  if (k <= 2) return true;
  PermGroup grp(*r);
  Permutation three = Permutation::from_cycles(k, {{0, 1, 2}});
  std::vector<int> cyc = k % 2 ? iota_vec(k) : std::vector<int>();
  if (k % 2 == 0)
    for (int i = 1; i < k; ++i) cyc.push_back(i);
  Permutation longc = Permutation::from_cycles(k, {cyc});
  return grp.contains(three) && grp.contains(longc);
}

AffectedReport affected_points(const PhiMap& phi, std::vector<int> T) {
  int m = phi.gamma_size(), n = phi.omega_size();
  if (T.empty()) T = iota_vec(m);
  std::sort(T.begin(), T.end());
  if (!contains_alt_on(phi.images(), T)) throw InputError("phi(G) does not contain Alt(T)");
  AffectedReport rep;
  rep.alt_order = half_factorial(static_cast<int>(T.size()));
  PermGroup p = phi.pair_group();
  for (int x = 0; x < n; ++x) {
    GenSet st = pointwise_stabilizer(p, {m + x});
    GenSet imgs(m);
    for (const auto& g : st.gens) imgs.gens.push_back(image_part(g, m));
    auto r = restrict_images(imgs, T);
    BigInt order = PermGroup(*r).order();
    rep.stabilizer_image_order.push_back(order);
    if (order < rep.alt_order || !contains_alt_on(imgs, T)) rep.affected.push_back(x);
  }
  return rep;
}

IsoSolverFn default_solver(const IsoConfig& config) {
  return [config](const PermGroup& group, const Permutation& sigma, const ColoredString& x,
                  const ColoredString& y, const Window& window) {
    return main_iso_window(group, sigma, x, y, window, config);
  };
}

ColoredString pad_outside(const ColoredString& x, const std::vector<int>& keep, int alphabet) {
  std::vector<int> l(x.size(), alphabet);
  for (int p : keep) l[p] = x[p];
  return ColoredString(l, alphabet + 1);
}

// ---------------------------------------------------------------------------

Certificate local_certificate(const PhiMap& phi, std::vector<int> T, const ColoredString& x,
                              const IsoSolverFn& solver) {
  int m = phi.gamma_size(), n = phi.omega_size();
  std::sort(T.begin(), T.end());
  T.erase(std::unique(T.begin(), T.end()), T.end());
  if (T.empty() || T.back() >= m || T.front() < 0) throw InputError("T must be a subset of Gamma");
  if (x.size() != n) throw InputError("string length differs from |Omega|");
  if (!contains_alt_on(phi.images(), iota_vec(m))) throw InputError("phi(G) does not contain Alt(Gamma)");
  Certificate cert;
  cert.T = T;
  PhiMap a = PhiMap::from_pairs(
      setwise_stabilizer_smallk(phi.pair_group(), T, static_cast<int>(T.size())), m, n);
  std::vector<int> w;
  Window all = iota_vec(n);
  auto not_full = [&](const PhiMap& grp, const std::vector<int>& window) {
    cert.full = false;
    cert.window = window;
    cert.group = grp.pairs();
    cert.m_images = *restrict_images(grp.images(), T);
    cert.order = PermGroup(cert.m_images).order();
    if (cert.order >= half_factorial(static_cast<int>(T.size())))
      throw InternalError("not-full certificate with a group of order >= |Alt(T)|");
    return cert;
  };
  for (int iter = 1;; ++iter) {
    if (iter > n + 1) throw InternalError("certificate iteration exceeded |Omega|");
    cert.iterations = iter;
    if (!contains_alt_on(a.images(), T)) return not_full(a, w);
    auto aff = affected_points(a, T).affected;
    std::vector<int> nw;
    std::set_union(w.begin(), w.end(), aff.begin(), aff.end(), std::back_inserter(nw));
    std::vector<char> in(n, 0);
    for (int p : nw) in[p] = 1;
    for (const auto& g : a.source().gens)
      for (int p : nw)
        if (!in[g[p]]) throw InternalError("window is not invariant under A(W)");
    if (nw == w) {
      std::vector<int> outside;
      for (int p = 0; p < n; ++p)
        if (!in[p]) outside.push_back(m + p);
      GenSet k = pointwise_stabilizer(a.pair_group(), outside);
      PhiMap kmap = PhiMap::from_pairs(k, m, n);
      bool ok = contains_alt_on(kmap.images(), T);
      for (const auto& g : kmap.source().gens) ok = ok && fixes_string(g, x);
      if (!ok) {
        // Below the size where fullness of the fixpoint is guaranteed:
        // fall back to the whole automorphism group of x in A(W).
        IsoCoset aut = solver(PermGroup(a.source()), Permutation(n), x, x, all);
        PhiMap full = a.restrict_to_subgroup(aut.group.generators());
        cert.fallback = true;
        if (!contains_alt_on(full.images(), T)) return not_full(full, all);
        kmap = full;
        w = all;
      }
      cert.full = true;
      cert.window = w;
      cert.group = kmap.pairs();
      cert.order = PermGroup(kmap.source()).order();
      return cert;
    }
    w = nw;
    IsoCoset aut = solver(PermGroup(a.source()), Permutation(n), x, x, w);
    if (aut.empty) throw InternalError("identity is not a partial automorphism");
    a = a.restrict_to_subgroup(aut.group.generators());
  }
}

IsoCoset compare_certificates(const PhiMap& phi, const ColoredString& x, const ColoredString& x2,
                              const std::vector<int>& T, const std::vector<int>& T2,
                              const IsoSolverFn& solver, const Certificate* cert,
                              const Certificate* cert2) {
  int m = phi.gamma_size(), n = phi.omega_size();
  if (T.size() != T2.size()) throw InputError("tuples of different lengths");
  auto sorted = [](std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  Certificate c1 = cert ? *cert : local_certificate(phi, T, x, solver);
  Certificate c2 = cert2 ? *cert2 : local_certificate(phi, T2, x2, solver);
  if (c1.T != sorted(T) || c2.T != sorted(T2)) throw InputError("certificate for another set");
  if (c1.full != c2.full || c1.window.size() != c2.window.size()) return IsoCoset::none();
  std::vector<int> tcoords(T.begin(), T.end());
  GenSet fix = pointwise_stabilizer(phi.pair_group(), tcoords);
  GenSet fix_src(n);
  for (const auto& g : fix.gens) fix_src.gens.push_back(source_part(g, m));
  // pi sends T[i] to T2[i] and the rest in increasing order.
  std::vector<int> img(m, -1);
  std::vector<char> used(m, 0), dom(m, 0);
  for (std::size_t i = 0; i < T.size(); ++i) {
    img[T[i]] = T2[i];
    used[T2[i]] = 1;
    dom[T[i]] = 1;
  }
  std::vector<int> free_src, free_dst;
  for (int p = 0; p < m; ++p) {
    if (!dom[p]) free_src.push_back(p);
    if (!used[p]) free_dst.push_back(p);
  }
  for (std::size_t i = 0; i < free_src.size(); ++i) img[free_src[i]] = free_dst[i];
  Permutation pi(img);
  Homomorphism hom(phi.source(), phi.images());
  if (!hom.image_contains(pi)) {
    if (free_dst.size() < 2) return IsoCoset::none();
    pi = pi * Permutation::from_cycles(m, {{free_dst[0], free_dst[1]}});
    if (!hom.image_contains(pi)) return IsoCoset::none();
  }
  Permutation sigma = hom.lift(pi);
  int alphabet = std::max(x.alphabet_size, x2.alphabet_size);
  auto xw = pad_outside(x, c1.window, alphabet);
  auto yw = pad_outside(x2, c2.window, alphabet);
  return solver(PermGroup(fix_src), sigma, xw, yw, iota_vec(n));
}

// ---------------------------------------------------------------------------

AggregateOutcome aggregate_certificates(const PhiMap& phi, const ColoredString& x,
                                        const std::vector<Certificate>& certs, Chooser& chooser,
                                        const IsoSolverFn& solver, const AggregateParams& params) {
  int m = phi.gamma_size(), n = phi.omega_size();
  if (certs.empty()) throw InputError("no certificates to aggregate");
  int k = static_cast<int>(certs[0].T.size());
  AggregateOutcome out;
  out.f_pairs = GenSet(m + n);
  for (const auto& c : certs)
    if (c.full)
      for (const auto& g : c.group.gens) out.f_pairs.gens.push_back(g);
  GenSet fimg(m);
  for (const auto& g : out.f_pairs.gens) fimg.gens.push_back(image_part(g, m));
  std::vector<char> moved(m, 0);
  for (const auto& g : fimg.gens)
    for (int p = 0; p < m; ++p)
      if (g[p] != p) moved[p] = 1;
  for (int p = 0; p < m; ++p)
    if (moved[p]) out.support.push_back(p);

  if (2 * out.support.size() >= static_cast<std::size_t>(m)) {
    auto orbs = orbits(fimg);
    for (const auto& o : orbs)
      if (2 * o.size() > static_cast<std::size_t>(m)) out.big_orbit = o;
    if (out.big_orbit.empty()) {
      out.kind = AggregateOutcome::Case::One;
      out.orbit_length.assign(m, 0);
      for (const auto& o : orbs)
        for (int p : o) out.orbit_length[p] = static_cast<int>(o.size());
      std::map<int, std::vector<int>> cls;
      for (int p = 0; p < m; ++p) cls[out.orbit_length[p]].push_back(p);
      for (auto& [len, pts] : cls)
        if (2 * pts.size() > static_cast<std::size_t>(m) && (len < 2 || pts.size() / len < 2))
          throw InternalError("orbit-length coloring has a large unsplit class");
      return out;
    }
    const auto& phi_orb = out.big_orbit;
    if (contains_alt_on(fimg, phi_orb)) {
      out.kind = AggregateOutcome::Case::TwoA;
      return out;
    }
    out.kind = AggregateOutcome::Case::TwoB;
    auto r = *restrict_images(fimg, phi_orb);
    int len = static_cast<int>(phi_orb.size());
    PermGroup rg(r, iota_vec(len));
    auto sizes = rg.chain().transversal_sizes();
    int d = 0;
    while (d < len && d < static_cast<int>(sizes.size()) && sizes[d] == len - d) ++d;
    out.transitivity = d;
    if (d > 5) out.anomalies.push_back("transitivity degree " + std::to_string(d) + " above 5");
    std::vector<int> left = phi_orb;
    for (int i = 0; i + 1 < d; ++i) {
      std::size_t c = chooser.choose(left.size(), "aggregation base point");
      out.trail.choice(left.size(), left[c], "aggregation base point");
      out.fixed.push_back(left[c]);
      left.erase(left.begin() + c);
    }
    out.rest = left;
    GenSet st = pointwise_stabilizer(PermGroup(fimg), out.fixed);
    auto rs = restrict_images(st, out.rest);
    if (!rs) throw InternalError("stabilizer does not preserve the orbit");
    out.schurian = orbital_configuration(*rs);
    auto summary = classify_classical(*out.schurian);
    if (summary.trivial_clique) throw InternalError("Schurian configuration is a clique");
    return out;
  }

  out.kind = AggregateOutcome::Case::Three;
  std::vector<char> in_s(m, 0);
  for (int p : out.support) in_s[p] = 1;
  for (int p = 0; p < m; ++p)
    if (!in_s[p]) out.rest.push_back(p);
  int r = static_cast<int>(out.rest.size());
  std::map<std::vector<int>, const Certificate*> by_set;
  for (const auto& c : certs) by_set[c.T] = &c;
  std::vector<Certificate> extra;
  extra.reserve(1024);
  auto cert_of = [&](const std::vector<int>& tuple) -> const Certificate* {
    auto s = tuple;
    std::sort(s.begin(), s.end());
    auto it = by_set.find(s);
    if (it != by_set.end()) return it->second;
    if (extra.size() == extra.capacity()) throw ResourceError("too many certificates");
    extra.push_back(local_certificate(phi, s, x, solver));
    by_set[s] = &extra.back();
    return &extra.back();
  };
  BigInt count = 1;
  for (int i = 0; i < k; ++i) count *= std::max(r - i, 0);
  if (count > params.tuple_cap) throw ResourceError("too many ordered tuples to compare");
  std::vector<Tuple> reps;
  std::size_t nt = dense_size(r, k);
  Configuration shape = Configuration::from_colors(r, k, std::vector<int>(nt, 0));
  std::vector<Configuration::Description> desc(nt);
  for (std::size_t idx = 0; idx < nt; ++idx) {
    Tuple t = shape.tuple_at(idx);
    auto s = t;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
      desc[idx] = {-1};
      out.tuple_class.emplace_back(t, -1);
      continue;
    }
    std::vector<int> gt;
    for (int p : t) gt.push_back(out.rest[p]);
    int cls = -1;
    for (std::size_t j = 0; j < reps.size() && cls < 0; ++j) {
      std::vector<int> gr;
      for (int p : reps[j]) gr.push_back(out.rest[p]);
      if (!compare_certificates(phi, x, x, gr, gt, solver, cert_of(gr), cert_of(gt)).empty)
        cls = static_cast<int>(j);
    }
    if (cls < 0) {
      cls = static_cast<int>(reps.size());
      reps.push_back(t);
    }
    desc[idx] = {cls};
    out.tuple_class.emplace_back(t, cls);
  }
  if (params.build_relation && k <= 4) {
    out.relation = Configuration::from_descriptions(r, k, desc);
    for (const auto& tc : twin_classes(*out.relation))
      if (static_cast<int>(tc.size()) >= k)
        out.anomalies.push_back("twin class of size " + std::to_string(tc.size()));
  }
  return out;
}

}  // namespace giso
