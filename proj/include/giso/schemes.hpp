#ifndef GISO_SCHEMES_HPP
#define GISO_SCHEMES_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "giso/group.hpp"
#include "giso/relstruct.hpp"

namespace giso {

struct ColorGraph {
  int color = 0;
  std::vector<std::vector<int>> components;  // ordered by minimum point
  int out_degree = -1;                       // -1 when not constant
};

struct ClassicalSummary {
  bool homogeneous = false;
  std::vector<std::vector<int>> vertex_classes;
  std::vector<int> vertex_colors, edge_colors;
  std::vector<ColorGraph> color_graphs;  // one per edge color
  bool primitive = false;
  bool uniprimitive = false;
  bool trivial_clique = false;
};

// Requires a coherent configuration of arity 2 (InputError otherwise).
ClassicalSummary classify_classical(const Configuration& c);

// Connected components of {(x,y) : c(x,y) = color}, ignoring direction.
std::vector<std::vector<int>> color_components(const Configuration& c, int color);

// k-subsets of {0..m-1} in lexicographic order.
std::vector<std::vector<int>> k_subsets(int m, int k);
BigInt binomial(int n, int k);

// J(m,s) on the s-subsets in lexicographic order; color = |S1 \ S2|.
Configuration johnson_scheme(int m, int s);

struct JohnsonId {
  int m = 0, s = 0;
  // Each element of Lambda as the sorted set of points whose image holds it,
  // numbered in order of discovery (scanning pairs (x,y) lexicographically).
  std::vector<std::vector<int>> lambda;
  std::vector<std::vector<int>> iota;   // point -> sorted indices into lambda
  std::vector<int> color_to_intersection;  // -1 for unused colors
  int upsilon = -1, delta = -1;          // the colors used as the two orbitals
};

struct IdentifyFailure {
  std::string reason;
  std::optional<std::pair<int, int>> witness;
};

// Explicit isomorphism with a Johnson scheme. m and s are optional claims
// (0 = unknown). Every answer is checked in full before it is returned.
std::optional<JohnsonId> identify_johnson(const Configuration& c, int m = 0, int s = 0,
                                          IdentifyFailure* why = nullptr);

// Orbitals of a group as a configuration: c(x,y) = orbit of (x,y) on pairs.
Configuration orbital_configuration(const GenSet& gens);

struct AltIdentification {
  int m = 0, k = 0;
  std::vector<std::vector<int>> lambda;  // as for JohnsonId
  std::vector<std::vector<int>> iota;
  GenSet images;  // phi(g) on lambda, one per input generator
  bool images_even = true;
};

// Identifies a transitive group on C(m,k) points with Alt_m or Sym_m acting
// on k-subsets. The identity iota(w^g) = iota(w)^phi(g) is verified on every
// generator and point.
std::optional<AltIdentification> try_identify_alt_action(const GenSet& gens, int m, int k,
                                                         IdentifyFailure* why = nullptr);
AltIdentification identify_alt_action(const GenSet& gens, int m, int k);

struct DesignCheck {
  int v = 0, u = 0, t = 0, b = 0;
  long long lambda = -1;  // common count, -1 if counts differ
  bool is_t_design = false;
  bool count_formula_ok = true;  // b = lambda C(v,t)/C(u,t)
  bool fisher_ok = true;         // b >= v, for incomplete 2-designs
  bool rw_bound_ok = true;       // b >= C(v,s) for s <= min(t/2, v-u)
};

DesignCheck check_design(int v, const std::vector<std::vector<int>>& edges, int t);

struct SemiregularWitness {
  std::string check;
  std::vector<int> colors;
  int first = -1, second = -1;  // two vertices of differing degree
  int degree_first = 0, degree_second = 0;
};

struct SemiregularReport {
  bool ok = true;
  bool triples_checked = false;  // skipped above 40 points or 12 colors
  std::vector<SemiregularWitness> witnesses;
};

SemiregularReport semiregular_checks(const Configuration& c);

}  // namespace giso

#endif
