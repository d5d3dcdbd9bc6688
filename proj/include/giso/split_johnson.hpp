#ifndef GISO_SPLIT_JOHNSON_HPP
#define GISO_SPLIT_JOHNSON_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "giso/perm.hpp"
#include "giso/relstruct.hpp"
#include "giso/schemes.hpp"

namespace giso {

// Non-canonical choices are delegated to a chooser. Isomorphism testing
// runs one side with the default chooser and enumerates every choice
// sequence on the other.
class Chooser {
 public:
  virtual ~Chooser() = default;
  // Index into a candidate list of the given size (size >= 1).
  virtual std::size_t choose(std::size_t count, const std::string& what) = 0;
};

class FirstChooser : public Chooser {
 public:
  std::size_t choose(std::size_t, const std::string&) override { return 0; }
};

// Thrown by ScriptedChooser when the script runs out.
struct ChoicePending {
  std::size_t count;
};

class ScriptedChooser : public Chooser {
 public:
  explicit ScriptedChooser(std::vector<std::size_t> script) : script_(std::move(script)) {}
  std::size_t choose(std::size_t count, const std::string& what) override;

 private:
  std::vector<std::size_t> script_;
  std::size_t pos_ = 0;
};

// Runs `body` once for every complete choice sequence (depth first). Throws
// ResourceError after `max_runs` leaves.
void for_each_choice_sequence(const std::function<void(Chooser&)>& body,
                              std::size_t max_runs);

// Points fixed by the procedure so far and the cost of those choices.
struct SoJTrail {
  std::vector<int> stabilized;
  BigInt index_cost = 1;
  std::vector<std::size_t> choice_sizes;
  std::vector<std::string> ledger;

  // Records a choice among `count` candidates that fixes `point`.
  void choice(std::size_t count, int point, const std::string& what);
  void note(const std::string& s) { ledger.push_back(s); }
};

// A coloring of `domain` in which some color classes are split into parts
// of equal size >= 2. A class that is not split has a single part.
struct ColoredPartition {
  int universe = 0;
  std::vector<int> domain;           // sorted
  std::vector<int> color;            // per universe point, -1 off the domain
  std::vector<Configuration::Description> palette;
  std::vector<std::vector<std::vector<int>>> cells;  // per color, parts by minimum

  // desc and part are per domain point (parallel to `domain`); part -1
  // leaves the class unsplit, otherwise points with equal part key share a
  // part.
  static ColoredPartition build(int universe, std::vector<int> domain,
                                const std::vector<Configuration::Description>& desc,
                                const std::vector<int>& part);
  bool admissible(std::string* why = nullptr) const;
  // Every part has at most alpha |domain| points.
  bool is_alpha(double alpha) const;
  std::size_t largest_part() const;
  std::uint64_t signature() const;
};

struct SoJOutcome {
  enum class Variant { Partition, Johnson };
  Variant variant = Variant::Partition;
  // Always present; for Johnson, gamma0 is one unsplit class of it.
  ColoredPartition partition;
  std::optional<JohnsonId> johnson;  // iota on gamma0 (indices into gamma0)
  std::vector<int> gamma0;
  SoJTrail trail;

  bool verify(double alpha, std::string* why = nullptr) const;
  std::uint64_t signature() const;
};

struct SoJParams {
  int base_size = 12;              // |V1| at or below this: individualize V1
  double small_v2_factor = 6.0;    // |V2| <= (f ln|V1|)^{3/2}: individualize V2
  int max_d = 4;
  bool johnson_fast_path = true;
};

struct DesignLemmaResult {
  enum class Kind { NoDominant, NonClique };
  Kind kind = Kind::NoDominant;
  Tuple prefix;
  Configuration coloring;      // 1-skeleton of the restriction by prefix
  int dominant_color = -1;
  std::vector<int> dominant_class;
  Configuration restricted;    // 2-skeleton on the dominant class (NonClique)
  std::size_t candidates = 0;  // prefixes of this length and kind
};

// A color is dominant when its vertex class has more than alpha |Gamma|
// points. global_of maps points to the labels recorded in the trail.
DesignLemmaResult design_lemma(const Configuration& c, double alpha, Chooser& chooser,
                               SoJTrail& trail, const std::vector<int>& global_of = {});

// Is the class a set of pairwise twins? Requires a coherent classical input
// and |cls| >= |Gamma|/2. A clique class that is not a twin class is
// reported as an InternalError.
bool large_clique_twin_check(const Configuration& c, const std::vector<int>& cls);

struct BipartiteGraph {
  int n1 = 0, n2 = 0;
  std::vector<std::vector<char>> adj;  // n1 x n2
};

// Outcome on V1 (points 0..n1-1); V2 is numbered n1..n1+n2-1 in the trail.
SoJOutcome bipartite_soj(const BipartiteGraph& g, double beta, Chooser& chooser,
                         const SoJParams& params = {});

struct CoherentSoJResult {
  bool is_partition = true;
  std::vector<int> c1, c2;  // the larger and the smaller vertex class
  // Partition of C1: per position in c1 a color and a part key (-1 unsplit).
  std::vector<std::int64_t> color;
  std::vector<int> part;
  // Reduced bipartite graph: v1 inside C1, each v2 element a set inside C2.
  std::vector<int> v1;
  std::vector<std::vector<int>> v2;
  std::vector<std::vector<char>> adj;
};

CoherentSoJResult coherent_soj(const Configuration& c, Chooser& chooser, SoJTrail& trail,
                               const std::vector<int>& global_of = {});

// Requires a uniprimitive coherent classical configuration, 2/3 <= alpha < 1.
SoJOutcome split_or_johnson(const Configuration& c, double alpha, Chooser& chooser,
                            const SoJParams& params = {});

}  // namespace giso

#endif
