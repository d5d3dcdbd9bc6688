#ifndef GISO_PERM_HPP
#define GISO_PERM_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace giso {

using BigInt = boost::multiprecision::cpp_int;

// A bijection of {0..n-1}. Points are acted on from the right: the image of
// r under g is written r^g, and products are read left to right, so
// r^(g*h) = (r^g)^h.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(int degree);
  explicit Permutation(std::vector<int> images);

  static Permutation from_cycles(int degree,
                                 const std::vector<std::vector<int>>& cycles);

  int degree() const { return static_cast<int>(images_.size()); }
  int operator[](int point) const { return images_[point]; }
  const std::vector<int>& images() const { return images_; }

  bool is_identity() const;
  Permutation operator*(const Permutation& rhs) const;
  Permutation inverse() const;
  Permutation pow(long long e) const;
  // +1 for even, -1 for odd.
  int sign() const;
  std::vector<std::vector<int>> cycles() const;
  std::string str() const;

  bool operator==(const Permutation& rhs) const { return images_ == rhs.images_; }
  bool operator!=(const Permutation& rhs) const { return images_ != rhs.images_; }
  bool operator<(const Permutation& rhs) const { return images_ < rhs.images_; }

 private:
  std::vector<int> images_;
};

std::ostream& operator<<(std::ostream& os, const Permutation& p);

struct PermutationHash {
  std::size_t operator()(const Permutation& p) const;
};

// Generators of a permutation group. An empty list is the trivial group.
struct GenSet {
  int degree = 0;
  std::vector<Permutation> gens;

  GenSet() = default;
  explicit GenSet(int n) : degree(n) {}
  GenSet(int n, std::vector<Permutation> g);

  bool empty() const { return gens.empty(); }
  // Throws InputError if a generator has the wrong degree.
  void check() const;
};

// Restrict a permutation that leaves `domain` invariant to that domain,
// relabelled 0..|domain|-1 in the given order.
Permutation restrict_to(const Permutation& g, const std::vector<int>& domain,
                        const std::vector<int>& index_of);

// Parse "(0 1 2)(3 4)" or "1 2 0 4 3".
Permutation parse_permutation(const std::string& text, int degree);

}  // namespace giso

#endif
