#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ramsey/structures.hpp"

namespace ramsey {

using BigInt = boost::multiprecision::cpp_int;

/// Vertices are the embeddings a -> c; each hyperedge is the set of
/// vertices e o f, f in Emb(a, b), for one embedding e of b into c.
struct ABCHypergraph {
  std::vector<VertexMap> vertices;           // lexicographic
  std::vector<std::vector<int>> edges;       // sorted, duplicate free
  std::vector<int> multiplicity;             // embeddings of b per edge
  std::vector<VertexMap> edge_copy;          // least embedding of b per edge
  int emb_ab = 0;                            // |Emb(a, b)|
  std::int64_t copies_of_b = 0;              // |Emb(b, c)|

  /// Index of an embedding a -> c, or -1.
  int index_of(const VertexMap& e) const;
};

ABCHypergraph abc_hypergraph(const Structure& a, const Structure& b,
                             const Structure& c,
                             std::int64_t max_nodes = 10000000);

struct ColoringWitness {
  int r = 2;
  std::vector<int> colors;  // per hypergraph vertex
};

struct ArrowResult {
  bool holds = false;
  /// Lexicographically least bad coloring when the arrow fails.
  std::optional<ColoringWitness> witness;
  std::int64_t nodes = 0;
  int vertices = 0;
  int edges = 0;
};

/// Exact search for an r-coloring with no monochromatic hyperedge. Throws
/// CapExceeded once max_nodes assignments have been tried.
ArrowResult check_arrow(const Structure& a, const Structure& b,
                        const Structure& c, int r,
                        std::int64_t max_nodes = 10000000);
ArrowResult check_arrow(const ABCHypergraph& h, int r,
                        std::int64_t max_nodes = 10000000);

/// Index of the least monochromatic hyperedge, if any.
std::optional<int> monochromatic_edge(const ABCHypergraph& h,
                                      const std::vector<int>& colors);
/// Every hyperedge sees more than t colors (t = 1: the coloring is bad).
bool every_edge_exceeds(const ABCHypergraph& h, const std::vector<int>& colors,
                        int t);

/// For a with a nontrivial automorphism: color an embedding 0 when it is the
/// least in its Aut(a)-orbit and 1 otherwise. Every hyperedge then sees
/// both colors. Returns nullopt when Aut(a) is trivial.
std::optional<ColoringWitness> automorphism_coloring(const Structure& a,
                                                     const ABCHypergraph& h);

struct DegreeResult {
  int t = 1;  // least t: some copy of b sees at most t colors
  /// A coloring giving every copy more than t - 1 colors (absent for t = 1
  /// when the arrow holds).
  std::optional<ColoringWitness> lower_witness;
  int automorphisms = 1;  // |Aut(a)|, for the copy-counting degree
  double copy_degree() const {
    return static_cast<double>(t) / automorphisms;
  }
};

DegreeResult ramsey_degree_in(const Structure& a, const Structure& b,
                              const Structure& c, int r,
                              std::int64_t max_nodes = 10000000);

/// t_1 .. t_k.
std::vector<BigInt> tangent_numbers(int k);
/// t_k * k!.
BigInt clique_big_degree(int k);

/// Levels m = 0..depth; each level partitions {m, ..., |s|-1} into classes
/// of equal type over {0, ..., m-1}, classes ordered by least member.
/// parent[m][i] is the class of level m-1 containing class i of level m.
struct TypeTree {
  std::vector<std::vector<VertexSet>> levels;
  std::vector<std::vector<int>> parent;
};

TypeTree tree_of_types(const Structure& s, int depth);

}  // namespace ramsey
