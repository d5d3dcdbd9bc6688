#ifndef GISO_GROUP_HPP
#define GISO_GROUP_HPP

#include <deque>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "giso/perm.hpp"

namespace giso {

// Stabilizer chain built by the Schreier-Sims loop with the Filter routine.
// The base lists every point (x_1..x_n); level i holds coset representatives
// C_i of G_{i+1} in G_i, where G_i fixes base[0..i-1].
//
// With right actions, an element g sifts as g = residue * h_{i-1} * ... * h_0
// with h_j in C_j.
class StabilizerChain {
 public:
  StabilizerChain() = default;
  explicit StabilizerChain(const GenSet& gens,
                           const std::vector<int>& base_hint = {});

  int degree() const { return degree_; }
  int levels() const { return static_cast<int>(levels_.size()); }
  const std::vector<int>& base() const { return base_; }

  struct Sift {
    int level;
    Permutation residue;
  };
  Sift sift(const Permutation& g) const;
  bool contains(const Permutation& g) const;

  // Add a generator; returns false if it was already a member.
  bool extend(const Permutation& g);

  BigInt order() const;
  // |C_i| for each level.
  std::vector<int> transversal_sizes() const;
  // Representatives of level i, identity first.
  std::vector<Permutation> transversal(int level) const;
  // The representative in C_i sending base[i] to point, if any.
  const Permutation* rep_for(int level, int point) const;
  const Permutation* rep_inverse_for(int level, int point) const;
  // Non-identity elements of all C_j with j >= level; they generate G_level.
  std::vector<Permutation> strong_generators(int from_level = 0) const;

  // Visit every element of the group. Stops early if fn returns false.
  void for_each_element(const std::function<bool(const Permutation&)>& fn) const;

 private:
  struct Level {
    std::vector<int> reps;      // pool indices, identity first (-1)
    std::vector<int> inverses;  // pool indices parallel to reps
    std::vector<int> slot;      // point -> index into reps, or -1
  };
  int filter(Permutation& gamma) const;
  void add_and_close(std::deque<std::pair<int, int>>& queue);
  const Permutation& element(int idx) const;

  int degree_ = 0;
  std::vector<int> base_;
  std::vector<Level> levels_;
  std::deque<Permutation> pool_;
  Permutation identity_;
};

// A permutation group: its generators together with a stabilizer chain.
// Cheap to copy; immutable.
class PermGroup {
 public:
  PermGroup() : PermGroup(GenSet(0)) {}
  explicit PermGroup(const GenSet& gens, const std::vector<int>& base_hint = {});
  static PermGroup trivial(int degree) { return PermGroup(GenSet(degree)); }
  static PermGroup symmetric(const std::vector<int>& points, int degree);

  int degree() const { return gens_.degree; }
  // Non-redundant generators (each one enlarged the group when added).
  const GenSet& generators() const { return gens_; }
  const StabilizerChain& chain() const { return *chain_; }
  BigInt order() const { return chain_->order(); }
  bool contains(const Permutation& g) const { return chain_->contains(g); }
  bool is_trivial() const { return gens_.gens.empty(); }
  std::vector<Permutation> elements(std::size_t limit) const;

 private:
  GenSet gens_;
  std::shared_ptr<const StabilizerChain> chain_;
};

// Orbits as sorted cells ordered by minimum point.
std::vector<std::vector<int>> orbits(const GenSet& gens);
std::vector<std::vector<int>> orbits_on(const GenSet& gens,
                                        const std::vector<int>& domain);

struct BlockSystem {
  std::vector<std::vector<int>> blocks;  // sorted, ordered by minimum
  int block_size = 0;
  std::vector<int> block_of;  // point -> block index, -1 off the domain
};

// Smallest block containing a and b, expressed as the whole system it
// generates. Points outside `domain` are ignored (domain must be invariant).
BlockSystem block_system_containing(const GenSet& gens,
                                    const std::vector<int>& domain, int a, int b);
// A block system on which the induced action is primitive, or nullopt if the
// action on `domain` is already primitive. Throws if not transitive.
std::optional<BlockSystem> minimal_block_system(const GenSet& gens);
std::optional<BlockSystem> minimal_block_system_on(const GenSet& gens,
                                                   const std::vector<int>& domain);
// Every system with primitive quotient reachable from a block {min, b}.
std::vector<BlockSystem> maximal_block_systems_on(const GenSet& gens,
                                                  const std::vector<int>& domain);
bool is_block_system(const GenSet& gens, const BlockSystem& bs);
// Generators acting on the blocks, as permutations of block indices.
GenSet action_on_blocks(const GenSet& gens, const BlockSystem& bs);

GenSet pointwise_stabilizer(const PermGroup& g, const std::vector<int>& points);
GenSet pointwise_stabilizer(const StabilizerChain& chain,
                            const std::vector<int>& points);

// Generators of H = {g in G : test(g)} given [G:H] <= index_bound. Right
// cosets are discovered by their representatives; Schreier generators then
// generate H.
GenSet subgroup_by_test(const PermGroup& g,
                        const std::function<bool(const Permutation&)>& test,
                        std::size_t index_bound);

// Setwise stabilizer of a small set via its orbit on k-subsets.
GenSet setwise_stabilizer_smallk(const PermGroup& g, const std::vector<int>& set,
                                 int k_max = 6);

// A homomorphism given by generator images. Internally a chain for the group
// of pairs (phi(g), g) on the disjoint union, with the image domain first.
class Homomorphism {
 public:
  Homomorphism(const GenSet& source, const GenSet& images);

  int source_degree() const { return n_src_; }
  int image_degree() const { return n_img_; }
  bool image_contains(const Permutation& q) const;
  // Some g with phi(g) = q; throws InputError if q is not in the image.
  Permutation lift(const Permutation& q) const;
  GenSet kernel() const;
  PermGroup image() const;
  // One lift for every element of the image. Stops early if fn returns false.
  void for_each_lift(const std::function<bool(const Permutation&)>& fn) const;
  // Generators of phi^{-1}(target).
  GenSet preimage(const GenSet& target) const;

 private:
  int n_src_, n_img_;
  StabilizerChain chain_;
};

GenSet preimage_of_subgroup(const GenSet& gens, const GenSet& images,
                            const GenSet& target);

// Generator files: "degree n", then one permutation per line.
GenSet read_generators(std::istream& in);
GenSet read_generators_file(const std::string& path);
void write_generators(std::ostream& out, const GenSet& gens);

BigInt factorial(int n);

}  // namespace giso

#endif
