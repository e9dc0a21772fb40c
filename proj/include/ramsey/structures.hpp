#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ramsey/errors.hpp"

namespace ramsey {

using Tuple = std::vector<int>;
using VertexSet = std::vector<int>;  // sorted, duplicate free
using VertexMap = std::vector<int>;  // source vertex -> target vertex

struct Symbol {
  std::string name;
  int arity = 0;
  bool operator==(const Symbol&) const = default;
};

/// Relation and function symbols. Names are unique across both lists.
class Language {
 public:
  std::string name;
  std::vector<Symbol> relations;
  std::vector<Symbol> functions;

  Language() = default;
  explicit Language(std::string n) : name(std::move(n)) {}

  int add_relation(const std::string& sym, int arity);
  int add_function(const std::string& sym, int arity);
  int relation_index(std::string_view sym) const;  // -1 if absent
  int function_index(std::string_view sym) const;  // -1 if absent
  bool has_symbol(std::string_view sym) const;
  bool relational() const { return functions.empty(); }

  /// Same symbols with the same arities in the same order.
  bool same_symbols(const Language& o) const {
    return relations == o.relations && functions == o.functions;
  }
};

/// Finite structure on vertices 0..n-1. Function values default to the
/// empty set; only non-empty values are stored.
class Structure {
 public:
  Language lang;
  std::string name;
  int n = 0;
  std::vector<std::set<Tuple>> rel;
  std::vector<std::map<Tuple, std::set<int>>> fun;

  Structure() = default;
  Structure(Language l, int size);

  int size() const { return n; }
  void add_vertices(int k) { n += k; }

  void add_tuple(int r, Tuple t) { rel[r].insert(std::move(t)); }
  void add_tuple(std::string_view r, Tuple t);
  bool has_tuple(int r, const Tuple& t) const { return rel[r].count(t) > 0; }
  bool has_tuple(std::string_view r, const Tuple& t) const;

  void set_value(int f, Tuple args, std::set<int> vals);
  void add_value(int f, const Tuple& args, int v);
  const std::set<int>& value(int f, const Tuple& args) const;

  /// Adds a relation symbol to the language (with empty content).
  int extend_relation(const std::string& sym, int arity);

  /// Strict linear order on all vertices in relation "<".
  bool ordered() const;

  /// Number of stored relation tuples and non-empty function entries.
  std::size_t tuple_count() const;

  bool operator==(const Structure& o) const {
    return n == o.n && lang.same_symbols(o.lang) && rel == o.rel &&
           fun == o.fun;
  }
};

/// Convenience constructors used throughout tests and tools.
Language graph_language();              // E/2
Language ordered_graph_language();      // <, E
Language order_language();              // <
Structure make_graph(int n, const std::vector<std::pair<int, int>>& edges,
                     bool ordered = false);
Structure make_chain(int n);  // linear order 0<1<...<n-1
Structure complete_graph(int n, bool ordered = false);
Structure cycle_graph(int n);
Structure disjoint_union(const Structure& a, const Structure& b);

// ---------------------------------------------------------------------------

struct ValidationReport {
  bool valid = true;
  bool ordered = false;
  std::vector<std::string> problems;
};

ValidationReport validate_structure(const Structure& s);

VertexSet generated_closure(const Structure& s, const VertexSet& seed);
bool is_closed(const Structure& s, const VertexSet& vs);

struct NotClosed : public InvalidInput {
  NotClosed(std::string msg, Tuple args, int escaping)
      : InvalidInput(std::move(msg)), args(std::move(args)), vertex(escaping) {}
  Tuple args;
  int vertex;
};

struct Substructure {
  Structure s;
  VertexSet vertices;  // new index -> original vertex
};

/// Throws NotClosed when a function value escapes vset.
Substructure induced_substructure(const Structure& s, const VertexSet& vset);

enum class MapKind {
  Homomorphism,
  Monomorphism,
  HomomorphismEmbedding,
  Embedding,
  UClosedEmbedding,
  Isomorphism,
};

std::string to_string(MapKind k);
std::optional<MapKind> map_kind_from_string(std::string_view s);

/// Symbols treated as "U": function symbols, or relations R_F of arity k+1
/// encoding a set-valued function of arity k (last entry is the value).
using SymbolSet = std::vector<std::string>;

bool is_homomorphism(const VertexMap& f, const Structure& a,
                     const Structure& b);
bool is_embedding(const VertexMap& f, const Structure& a, const Structure& b);
bool is_homomorphism_embedding(const VertexMap& f, const Structure& a,
                               const Structure& b);
/// Image of f is closed under the U symbols.
bool is_u_closed_image(const VertexMap& f, const Structure& b,
                       const SymbolSet& u);
bool is_u_closed_set(const Structure& b, const VertexSet& vs,
                     const SymbolSet& u);

/// Strongest of isomorphism, U-closed embedding (only with u), embedding,
/// homomorphism-embedding, monomorphism, homomorphism; nullopt otherwise.
std::optional<MapKind> classify_map(const VertexMap& f, const Structure& a,
                                    const Structure& b,
                                    const SymbolSet* u = nullptr);

/// Whether a map of the given certified kind also satisfies `wanted`.
bool kind_implies(MapKind have, MapKind wanted);

struct EmbeddingMap {
  VertexMap map;
  MapKind kind = MapKind::Embedding;
  bool operator==(const EmbeddingMap&) const = default;
};

struct EmbeddingConstraints {
  /// candidates[v] lists the admissible images of source vertex v.
  std::optional<std::vector<std::vector<int>>> candidates;
  /// Require the image to be closed under these symbols.
  std::optional<SymbolSet> u_closed;
  /// Search for injective homomorphisms instead of embeddings.
  bool monomorphisms_only = false;
};

/// All embeddings a -> b in lexicographic order of the map sequence.
std::vector<EmbeddingMap> enumerate_embeddings(
    const Structure& a, const Structure& b,
    const EmbeddingConstraints& c = {}, std::int64_t max_nodes = 10000000);

/// Calls visit for every embedding in lexicographic order; stop by
/// returning false.
void for_each_embedding(const Structure& a, const Structure& b,
                        const EmbeddingConstraints& c,
                        const std::function<bool(const VertexMap&)>& visit,
                        std::int64_t max_nodes = 10000000);

std::optional<VertexMap> first_embedding(const Structure& a,
                                         const Structure& b,
                                         const EmbeddingConstraints& c = {});

/// All homomorphisms a -> b (not necessarily injective), lexicographic.
std::vector<VertexMap> enumerate_homomorphisms(const Structure& a,
                                               const Structure& b,
                                               std::int64_t max_nodes =
                                                   10000000);

bool isomorphic(const Structure& a, const Structure& b);

/// Graph on the same vertices, relation "E", symmetric and loop free.
Structure gaifman_graph(const Structure& s);
std::vector<std::vector<bool>> gaifman_matrix(const Structure& s);
/// Sorted neighbour lists of the Gaifman graph.
std::vector<std::vector<int>> gaifman_adjacency(const Structure& s);
/// Cliques of the Gaifman graph with at most max_size vertices (no bound
/// when negative), ordered by size then lexicographically.
std::vector<VertexSet> gaifman_cliques(const Structure& s, int max_size);

struct IrreducibilityResult {
  bool irreducible = true;
  std::optional<std::pair<VertexSet, VertexSet>> witness;
};

/// Reducible iff s is the free amalgam of two proper closed substructures.
/// The witness minimises the overlap, ties broken lexicographically.
IrreducibilityResult is_irreducible(const Structure& s);

/// Closed vertex subsets, ordered by size then lexicographically.
std::vector<VertexSet> closed_subsets(const Structure& s, int max_size = -1,
                                      std::int64_t max_nodes = 10000000);

/// Irreducible closed subsets (singletons included) that are maximal under
/// inclusion.
std::vector<VertexSet> maximal_irreducible_subsets(const Structure& s);

std::vector<EmbeddingMap> automorphisms(const Structure& s);
bool is_rigid(const Structure& s);

struct PartialAutomorphism {
  VertexSet domain;
  VertexMap map;  // map[i] is the image of domain[i]
  bool operator==(const PartialAutomorphism&) const = default;
};

std::vector<PartialAutomorphism> enumerate_partial_automorphisms(
    const Structure& s, std::optional<int> max_domain = std::nullopt);

/// Image of a vertex set, sorted.
VertexSet image_of(const VertexMap& f, const VertexSet& vs);
VertexSet image_of(const VertexMap& f);
VertexMap compose(const VertexMap& g, const VertexMap& f);  // g after f
VertexSet all_vertices(int n);

}  // namespace ramsey
