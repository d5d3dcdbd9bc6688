#ifndef GISO_RELSTRUCT_HPP
#define GISO_RELSTRUCT_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace giso {

using Tuple = std::vector<int>;

// (Gamma, (R_i)_i): relation i is a set of k-tuples.
struct RelStructure {
  int gamma_size = 0;
  int arity = 0;
  std::vector<std::vector<Tuple>> relations;

  void check() const;
};

// A total coloring c: Gamma^k -> {0..num_colors-1}, stored densely. The
// palette holds, for each color, the description that produced it; colors
// are numbered in lexicographic order of descriptions, so two runs on
// isomorphic inputs give the same palette.
class Configuration {
 public:
  using Description = std::vector<std::int64_t>;

  Configuration() = default;
  // Colors tuples by their descriptions (any order); the palette is sorted.
  static Configuration from_descriptions(int gamma_size, int arity,
                                         const std::vector<Description>& per_tuple,
                                         std::uint64_t parent_signature = 0);
  // Colors given directly; the relative order of the given labels is kept.
  static Configuration from_colors(int gamma_size, int arity, std::vector<int> colors);

  int gamma_size() const { return m_; }
  int arity() const { return k_; }
  std::size_t tuple_count() const { return color_.size(); }
  int num_colors() const { return static_cast<int>(palette_.size()); }
  int color(std::size_t index) const { return color_[index]; }
  int color(const Tuple& t) const { return color_[index_of(t)]; }
  const std::vector<int>& colors() const { return color_; }
  const std::vector<Description>& palette() const { return palette_; }
  // Hash of the palette history; equal for isomorphic inputs.
  std::uint64_t signature() const { return signature_; }

  std::size_t index_of(const Tuple& t) const;
  Tuple tuple_at(std::size_t index) const;
  // Color of the constant tuple (v,...,v).
  int vertex_color(int v) const;
  std::vector<std::size_t> class_sizes() const;
  bool same_partition(const Configuration& other) const;

 private:
  friend Configuration relabel(const Configuration& c, const std::vector<int>& sigma);

  int m_ = 0, k_ = 0;
  std::vector<int> color_;
  std::vector<Description> palette_;
  std::uint64_t signature_ = 0;
};

// Throws ResourceError unless k <= 4 and m^k <= 10^7.
std::size_t dense_size(int gamma_size, int arity);

// Equality pattern: entry i is the first position holding the same point.
std::vector<int> equality_pattern(const Tuple& t);

Configuration f1_refine(const RelStructure& s);
Configuration f2_config(const Configuration& p);
bool is_configuration(const Configuration& c);
Configuration skeleton(const Configuration& c, int l);
// Induced substructure on `subset` (its points relabelled in the given order).
Configuration induced(const Configuration& c, const std::vector<int>& subset);
Configuration restrict_by_tuple(const Configuration& c, const Tuple& prefix);
// Classes of the twin relation, ordered by minimum point.
std::vector<std::vector<int>> twin_classes(const Configuration& c);
bool are_twins(const Configuration& c, int a, int b);

// Apply sigma to the points: c'(x^sigma) = c(x). Palette and signature
// unchanged.
Configuration relabel(const Configuration& c, const std::vector<int>& sigma);

// Classical (k = 2) configuration from a graph: vertex, edge, non-edge.
Configuration graph_configuration(int n, const std::vector<std::pair<int, int>>& edges,
                                  bool directed = false);

RelStructure read_structure(std::istream& in);
RelStructure read_structure_file(const std::string& path);
void write_configuration(std::ostream& out, const Configuration& c);
// A structure file in which every tuple of Gamma^k has exactly one color.
Configuration read_configuration(std::istream& in);
Configuration read_configuration_file(const std::string& path);
// A total coloring as a structure with one relation per color.
RelStructure as_structure(const Configuration& c);

}  // namespace giso

#endif
