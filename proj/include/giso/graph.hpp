#ifndef GISO_GRAPH_HPP
#define GISO_GRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "giso/perm.hpp"
#include "giso/string_iso.hpp"

namespace giso {

struct Graph {
  int n = 0;
  bool directed = false;
  std::vector<std::pair<int, int>> edges;

  void check() const;
  bool has_edge(int u, int v) const;
  std::vector<int> degrees() const;
  bool connected() const;
  // The graph with vertex v renamed to p[v].
  Graph relabeled(const Permutation& p) const;
};

// Edge-list files: "n m [directed]" then m lines "u v", 0-indexed.
Graph read_graph(std::istream& in);
Graph read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const Graph& g);

// Omega is the set of pairs (u < v), or of ordered pairs u != v when
// directed, in lexicographic order; G is the image of Sym(V).
struct GraphStrings {
  int vertices = 0;
  bool directed = false;
  std::vector<std::pair<int, int>> omega;
  GenSet gens;
  ColoredString x, y;
};

// Throws InputError if the vertex counts or directedness differ.
GraphStrings graph_to_string(const Graph& g1, const Graph& g2);
// iota(sigma) on Omega.
Permutation pair_action(const GraphStrings& s, const Permutation& sigma);
// The vertex permutation inducing tau on Omega (needs at least 3 vertices,
// or 2 when directed).
Permutation vertex_lift(const GraphStrings& s, const Permutation& tau);

struct GraphIsoResult {
  bool isomorphic = false;
  std::optional<Permutation> iso;  // on vertices, maps g1 onto g2
  BigInt aut_order = 0;            // |Aut(g1)| when decided by the driver
  RecursionBudget budget;
};

// graph_to_string + main_string_iso.
GraphIsoResult graph_iso(const Graph& g1, const Graph& g2, const IsoConfig& config = {});

// Every vertex bijection mapping g1 onto g2, by exhaustive search with
// adjacency pruning. Throws InputError beyond `max_n` vertices.
std::vector<Permutation> brute_force_iso(const Graph& g1, const Graph& g2, int max_n = 10,
                                         std::size_t limit = SIZE_MAX);
// Oracle verdict only (stops at the first isomorphism); n <= 16.
bool brute_force_isomorphic(const Graph& g1, const Graph& g2);

// One representative of every isomorphism class of graphs on n vertices
// (n <= 7), by edge augmentation and canonical forms under all of Sym(n).
std::vector<Graph> all_graphs(int n, bool connected_only);

Graph random_graph(int n, double p, std::uint64_t seed);

// Generators of the automorphisms of a connected graph of maximum degree
// <= k that map the edge {p, q} to itself. Built layer by layer around the
// edge: the kernel of each restriction map is a product of symmetric groups
// on twin new vertices, its image is the stabilizer of a string over the
// <= k-subsets of the inner layers, found with luks_iso.
GenSet aut_fixing_edge(const Graph& g, int p, int q, int k);

struct GadgetReport {
  std::pair<int, int> e2;
  std::size_t fixing = 0, transposing = 0;  // generators fixing / swapping p, q
  BigInt order = 0;                         // |Aut_e(gadget)|
};

struct BoundedDegreeResult {
  IsoCoset iso;  // on the vertices of g1; rep maps g1 onto g2
  std::vector<GadgetReport> gadgets;
};

// The gadget joining g1 minus e1 and g2 minus e2 through new vertices
// p = 2n, q = 2n + 1 and the edge {p, q}.
Graph edge_gadget(const Graph& g1, std::pair<int, int> e1, const Graph& g2,
                  std::pair<int, int> e2);

// Iso(g1, g2) for connected graphs of maximum degree <= k (k >= 3), through
// one gadget per edge of g2.
BoundedDegreeResult bounded_degree_pipeline(const Graph& g1, const Graph& g2, int k);

}  // namespace giso

#endif
