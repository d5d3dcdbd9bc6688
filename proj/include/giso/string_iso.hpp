#ifndef GISO_STRING_ISO_HPP
#define GISO_STRING_ISO_HPP

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "giso/group.hpp"
#include "giso/perm.hpp"

namespace giso {

// A map Omega -> Sigma with Sigma = {0..alphabet_size-1}.
struct ColoredString {
  std::vector<int> letters;
  int alphabet_size = 0;

  ColoredString() = default;
  ColoredString(std::vector<int> l, int sigma);
  int size() const { return static_cast<int>(letters.size()); }
  int operator[](int p) const { return letters[p]; }
  bool operator==(const ColoredString& o) const { return letters == o.letters; }
};

// x^g, defined by x^g(p^g) = x(p).
ColoredString act(const ColoredString& x, const Permutation& g);
// y^{sigma^{-1}}, i.e. q -> y(q^sigma).
ColoredString pull_back(const ColoredString& y, const Permutation& sigma);

ColoredString read_string(std::istream& in);
ColoredString read_string_file(const std::string& path);

using Window = std::vector<int>;

// Iso_G(x,y): either empty or Aut * rep.
struct IsoCoset {
  bool empty = true;
  PermGroup group;
  Permutation rep;

  static IsoCoset none() { return IsoCoset{}; }
  static IsoCoset of(PermGroup g, Permutation r) { return IsoCoset{false, std::move(g), std::move(r)}; }
  bool contains(const Permutation& g) const;
  BigInt size() const { return empty ? BigInt(0) : group.order(); }
};

// Iso_{K sigma}(x,y) = Iso_K(x, y^{sigma^{-1}}) sigma.
IsoCoset coset_shift(const IsoCoset& c, const Permutation& sigma);
// Union of cosets of one common group, as a single coset.
IsoCoset coset_union(const std::vector<IsoCoset>& cs);

// Incremental form of coset_union; the group is assumed common to all
// pieces, so only the first piece's generators are taken.
class CosetUnion {
 public:
  void add(const IsoCoset& c);
  IsoCoset result() const;
  bool empty() const { return !first_; }

 private:
  std::optional<IsoCoset> first_;
  std::optional<Permutation> first_inv_;
  std::optional<StabilizerChain> chain_;
  GenSet gens_;
};

struct IsoConfig {
  std::size_t enumeration_cap = 1000000;
  std::size_t node_cap = 20000000;
  int depth_cap = 2000;
  // m <= C log2 n is treated as small (Open Question: C unspecified).
  double log_constant = 10.0;
  // Alternating-quotient branches; false gives pure Luks plus enumeration.
  bool use_alt = true;
  // Take the alternating branch whenever the quotient is identified, even
  // when enumeration would be cheap (exercises the branch on small inputs).
  bool prefer_alt = false;
  // Local-certificate branch for imprimitive alternating quotients.
  bool use_certificates = true;
  double soj_alpha = 2.0 / 3.0;
  int certificate_k = 0;  // 0: default max(8, ceil(2 log2 n)) capped at 10
  std::size_t certificate_subset_cap = 400;
  bool trace = false;  // collect a textual trace of branch decisions

  // Reads GISO_NODE_CAP if set.
  static IsoConfig from_env();
};

// Observational counters for the cost of a run.
struct RecursionBudget {
  int depth = 0;
  int max_depth = 0;
  std::size_t node_counter = 0;
  std::size_t stabilized_points = 0;
  BigInt coset_multiplier = 1;
  std::map<std::string, std::size_t> branches;
  std::vector<std::string> trace;
};

// The recursion of Luks's theorem over windows. H always leaves the current
// window invariant; H acts on the whole domain.
class IsoSolver {
 public:
  explicit IsoSolver(IsoConfig config = {}) : config_(std::move(config)) {}
  virtual ~IsoSolver() = default;

  IsoCoset solve(const PermGroup& h, const Window& window, const ColoredString& x,
                 const ColoredString& y);

  const RecursionBudget& budget() const { return budget_; }
  RecursionBudget& budget() { return budget_; }
  const IsoConfig& config() const { return config_; }

 protected:
  struct Quotient {
    BlockSystem blocks;
    bool primitive = false;
    GenSet action;  // generators of H (input order) acting on blocks
    PermGroup image;
    BigInt order;
  };
  // Transitive window: choose blocks, then dispatch.
  virtual IsoCoset transitive(const PermGroup& h, const Window& window,
                              const ColoredString& x, const ColoredString& y);
  // Union over coset representatives of the block kernel.
  IsoCoset enumerate_quotient(const PermGroup& h, const Window& window,
                              const Quotient& q, const ColoredString& x,
                              const ColoredString& y);
  Quotient quotient_for(const PermGroup& h, const Window& window);
  void count(const std::string& branch) { ++budget_.branches[branch]; }
  void note(const std::string& msg);

  IsoConfig config_;
  RecursionBudget budget_;
};

// Partial isomorphisms Iso_K^window(x,y) for K = group*sigma.
IsoCoset iso_window(const PermGroup& group, const Permutation& sigma,
                    const ColoredString& x, const ColoredString& y,
                    const Window& window, const IsoConfig& config = {});

// Luks's recursion with coset enumeration on primitive quotients.
// factor_bound is advisory: large factors only cost enumeration time.
IsoCoset luks_iso(const GenSet& gens, const ColoredString& x, const ColoredString& y,
                  int factor_bound = 0, const IsoConfig& config = {});

// The full driver: Luks's recursion plus the alternating-quotient branches.
IsoCoset main_string_iso(const GenSet& gens, const ColoredString& x,
                         const ColoredString& y, const IsoConfig& config = {},
                         RecursionBudget* budget = nullptr);
// The driver on a window and a coset group*sigma.
IsoCoset main_iso_window(const PermGroup& group, const Permutation& sigma,
                         const ColoredString& x, const ColoredString& y, const Window& window,
                         const IsoConfig& config = {}, RecursionBudget* budget = nullptr);

// A group element carrying y's class onto x's class, given canonical classes
// that partition the domain the same way. Empty if the class sizes differ.
std::optional<Permutation> align(const std::vector<int>& x_class,
                                 const std::vector<int>& y_class,
                                 const PermGroup& group);

// Throws InternalError unless every generator fixes x and rep maps x to y.
void verify_coset(const IsoCoset& c, const ColoredString& x, const ColoredString& y,
                  const Window& window);

Window full_window(int n);

}  // namespace giso

#endif
