#ifndef GISO_CERTIFICATES_HPP
#define GISO_CERTIFICATES_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "giso/group.hpp"
#include "giso/relstruct.hpp"
#include "giso/split_johnson.hpp"
#include "giso/string_iso.hpp"

namespace giso {

// phi: G -> Sym(Gamma) given by the images of the generators of G.
// Groups are carried as pair groups {(phi(g), g)} on Gamma then Omega, so
// every element keeps its image.
class PhiMap {
 public:
  PhiMap(const GenSet& gens, const GenSet& images);
  static PhiMap from_pairs(const GenSet& pairs, int gamma_size, int omega_size);

  int gamma_size() const { return m_; }
  int omega_size() const { return n_; }
  const GenSet& pairs() const { return pairs_; }
  GenSet source() const;  // generators on Omega
  GenSet images() const;  // their images on Gamma
  // phi(g) for g in the source group; throws InputError otherwise.
  Permutation image_of(const Permutation& g) const;
  // The restriction of phi to a subgroup given on Omega.
  PhiMap restrict_to_subgroup(const GenSet& sub) const;
  PermGroup pair_group() const { return PermGroup(pairs_); }

 private:
  PhiMap() = default;
  int m_ = 0, n_ = 0;
  GenSet pairs_;
  std::shared_ptr<const StabilizerChain> source_chain_;
};

Permutation pair_perm(const Permutation& image, const Permutation& g);

// Does the group generated by `gens` (on Gamma) restrict on T to a group
// containing Alt(T)? Sifts a 3-cycle and a long cycle of T.
bool contains_alt_on(const GenSet& gens, const std::vector<int>& T);

struct AffectedReport {
  std::vector<int> affected;
  // Per point of Omega: |phi(G_x)|_T| (the witness that it is, or is not,
  // at least |Alt(T)|).
  std::vector<BigInt> stabilizer_image_order;
  BigInt alt_order;
};

// x is affected when phi(G_x)|_T does not contain Alt(T). T defaults to
// Gamma and must be invariant under phi(G), whose restriction to T must
// contain Alt(T).
AffectedReport affected_points(const PhiMap& phi, std::vector<int> T = {});

// Windowed string isomorphism: elements tau of group*sigma with
// x(p) = y(p^tau) for p in the window.
using IsoSolverFn = std::function<IsoCoset(const PermGroup& group, const Permutation& sigma,
                                           const ColoredString& x, const ColoredString& y,
                                           const Window& window)>;
IsoSolverFn default_solver(const IsoConfig& config = {});

struct Certificate {
  bool full = false;
  std::vector<int> T;           // sorted subset of Gamma
  std::vector<int> window;      // W, sorted
  GenSet group;                 // full: K(T) on Omega, as pairs; not full: A(W) pairs
  GenSet m_images;              // not full: M(T) on positions of T
  BigInt order;                 // |K(T)| or |M(T)|
  int iterations = 0;
  bool fallback = false;        // the fixpoint stabilizer was not full; Aut(x) was used
};

// The local certificate of T for x. phi(G) must contain Alt(Gamma).
Certificate local_certificate(const PhiMap& phi, std::vector<int> T, const ColoredString& x,
                              const IsoSolverFn& solver);

// x on `keep`, a fresh letter elsewhere.
ColoredString pad_outside(const ColoredString& x, const std::vector<int>& keep, int alphabet);

// Elements of G sending the ordered tuple T to T2 and x^W to x2^{W2}.
IsoCoset compare_certificates(const PhiMap& phi, const ColoredString& x,
                              const ColoredString& x2, const std::vector<int>& T,
                              const std::vector<int>& T2, const IsoSolverFn& solver,
                              const Certificate* cert = nullptr,
                              const Certificate* cert2 = nullptr);

struct AggregateOutcome {
  enum class Case { One, TwoA, TwoB, Three };
  Case kind = Case::Three;
  std::vector<int> support;        // S
  GenSet f_pairs;                  // F, as pairs
  std::vector<int> orbit_length;   // Case 1: per point of Gamma
  std::vector<int> big_orbit;      // Case 2: Phi
  int transitivity = 0;            // Case 2b: d
  std::vector<int> fixed;          // Case 2b: x_1..x_{d-1}
  std::vector<int> rest;           // Case 2b: Phi'; Case 3: Gamma minus S
  std::optional<Configuration> schurian;   // Case 2b, on `rest`
  // Case 3: class of each ordered k-tuple of `rest` (positions), -1 with
  // repetitions; and the configuration when k <= 4.
  std::vector<std::pair<Tuple, int>> tuple_class;
  std::optional<Configuration> relation;
  SoJTrail trail;
  std::vector<std::string> anomalies;
};

struct AggregateParams {
  std::size_t tuple_cap = 5000;  // Case 3: ordered tuples compared
  bool build_relation = true;
};

AggregateOutcome aggregate_certificates(const PhiMap& phi, const ColoredString& x,
                                        const std::vector<Certificate>& certs,
                                        Chooser& chooser, const IsoSolverFn& solver,
                                        const AggregateParams& params = {});

}  // namespace giso

#endif
