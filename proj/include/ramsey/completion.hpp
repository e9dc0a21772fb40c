#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ramsey/structures.hpp"

namespace ramsey {

using Rational = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------
// Metric spaces

/// Partial graph with positive rational edge labels.
struct EdgeLabelledGraph {
  int n = 0;
  std::map<std::pair<int, int>, Rational> labels;  // keys have first < second

  EdgeLabelledGraph() = default;
  explicit EdgeLabelledGraph(int size) : n(size) {}
  /// Throws InvalidInput on self pairs, out-of-range vertices or labels <= 0.
  void set(int u, int v, const Rational& d);
  std::optional<Rational> get(int u, int v) const;
  std::set<Rational> alphabet() const;
  bool complete() const;
  bool operator==(const EdgeLabelledGraph&) const = default;
};

/// Relation name used for a label, e.g. 3/2 -> "d_3_2".
std::string label_relation_name(const Rational& d);
std::optional<Rational> parse_label_relation_name(const std::string& name);
/// One symmetric binary relation per label, in increasing label order.
Structure to_structure(const EdgeLabelledGraph& g);
/// Reads every relation named d_<p>_<q>; throws InvalidInput on pairs with
/// two labels or on asymmetric tuples.
EdgeLabelledGraph labelled_graph_from_structure(const Structure& s);

/// cycle[i] -- cycle[i+1] carries labels[i]; the last label closes the
/// cycle. labels[0] exceeds the sum of the others.
struct NonMetricCycle {
  std::vector<int> cycle;
  std::vector<Rational> labels;
};

struct MetricCompletion {
  std::optional<EdgeLabelledGraph> completed;
  std::optional<NonMetricCycle> witness;
  Rational cap;  // D, the largest label of the input
  bool ok() const { return completed.has_value(); }
};

/// Shortest-path completion capped by the largest label, or the shortest
/// non-metric cycle mapping into g (least first edge, then lexicographically
/// least path). Throws InvalidInput when n >= 2 and g has no labels.
MetricCompletion complete_metric(const EdgeLabelledGraph& g);

bool satisfies_triangle_inequality(const EdgeLabelledGraph& g);

// ---------------------------------------------------------------------------
// Equivalences

/// Partial {E,N}-labelling of pairs; true means E.
struct EquivalenceGraph {
  int n = 0;
  std::map<std::pair<int, int>, bool> same;

  EquivalenceGraph() = default;
  explicit EquivalenceGraph(int size) : n(size) {}
  void set(int u, int v, bool e);
  std::optional<bool> get(int u, int v) const;
  bool operator==(const EquivalenceGraph&) const = default;
};

struct EquivalenceCompletion {
  std::optional<EquivalenceGraph> completed;
  /// On failure: the N-edge endpoints u, v followed by the E-path back,
  /// i.e. u, v, w_1, ..., w_j with v ~ w_1 ~ ... ~ w_j ~ u all labelled E.
  std::optional<std::vector<int>> witness;
  bool ok() const { return completed.has_value(); }
};

EquivalenceCompletion complete_equivalence(const EquivalenceGraph& g);

/// Structure over symmetric relations "E" and "N".
Structure to_structure(const EquivalenceGraph& g);
EquivalenceGraph equivalence_graph_from_structure(const Structure& s);

/// Imaginary-vertex encoding of a complete {E,N}-graph that is an
/// equivalence: original vertices keep their numbers, one imaginary vertex
/// per class follows (classes ordered by least member), unary relations O
/// and I, unary function F mapping each original vertex to its class. With
/// `ordered`, s must be convexly ordered by "<"; originals precede
/// imaginaries and classes are ordered like their members.
Structure equivalence_U(const Structure& s, bool ordered = false);
/// Inverse direction: the {E,N}-graph on the O vertices, E iff equal F
/// values; "<" restricted to O is kept when `ordered`.
Structure equivalence_T(const Structure& d, bool ordered = false);
/// Every E-class forms an interval of "<".
bool convexly_ordered(const Structure& s);

// ---------------------------------------------------------------------------
// Orders

enum class OrderViolation { None, Reflexive, Symmetric, Cycle };
std::string to_string(OrderViolation v);

struct OrderExtension {
  std::optional<Structure> result;
  OrderViolation violation = OrderViolation::None;
  /// (v) for a reflexive pair, (u, v) for a symmetric pair, otherwise the
  /// shortest oriented cycle starting at its least vertex, lexicographically
  /// least among those.
  std::vector<int> witness;
  bool ok() const { return result.has_value(); }
};

/// Least oriented cycle of a binary relation given as successor lists, or
/// empty when acyclic (loops count as cycles of length one).
std::vector<int> least_cycle(const std::vector<std::set<int>>& succ);

/// Extends relation `rel` (default "<") to a linear order by a topological
/// sort that always takes the least available vertex.
OrderExtension extend_linear_order(const Structure& s,
                                   const std::string& rel = "<");

struct PosetCompletion {
  std::optional<Structure> result;
  /// 0 when no invariant clause fails, otherwise 1 or 2.
  int clause = 0;
  std::pair<int, int> pair{-1, -1};
  /// Order violations of "<<" alone or of "<" together with the closure.
  OrderViolation violation = OrderViolation::None;
  std::vector<int> witness;
  bool ok() const { return result.has_value(); }
};

/// Structures over "<" and "<<". Clause 1 fails on x << y with y < x;
/// clause 2 fails on a pair x <<' y of the transitive closure that is not
/// in << while x and y are related by "<". On success << is replaced by its
/// closure and "<" is extended to a linear order containing it.
PosetCompletion complete_poset_linext(const Structure& s);

// ---------------------------------------------------------------------------
// C-relations

struct CRelationReport {
  bool holds = true;
  /// 1..5 for the axioms, 6 for convexity of "<".
  int axiom = 0;
  std::vector<int> witness;  // (a, b, c) or (a, b, c, d)
};

/// Evaluates the axioms of C (ternary relation "C") on all vertex tuples in
/// lexicographic order, then convexity when "<" is present.
CRelationReport check_c_relation(const Structure& s);

// ---------------------------------------------------------------------------
// Boolean algebras and rigid surjections

/// g[j] is the image of atom b_j. Restricted growth order.
std::vector<std::vector<int>> enumerate_rigid_surjections(int m, int k);

/// Powerset algebra on k atoms: vertex x is the bitmask x, functions
/// "join", "meet" (binary) and "neg" (unary), unary relations "Zero",
/// "One", antilexicographic "<". Throws InvalidInput for k > 4.
Structure ordered_boolean_algebra(int k);

/// X -> g^{-1}[X] as a vertex map between the algebras.
VertexMap surjection_to_embedding(const std::vector<int>& g, int m, int k);
/// g(b_j) = the atom x with j in f({x}); throws InvalidInput otherwise.
std::vector<int> embedding_to_surjection(const VertexMap& f, int m, int k);

struct BACorrespondence {
  std::vector<std::pair<std::vector<int>, VertexMap>> pairs;
  std::size_t surjections = 0;
  std::size_t embeddings = 0;   // exhaustive search count
  bool all_certified = true;    // every induced map is an embedding
  bool round_trip = true;       // embedding -> surjection -> embedding
  bool counts_agree() const { return surjections == embeddings; }
};

BACorrespondence ba_embedding_correspondence(int m, int k);

// ---------------------------------------------------------------------------
// Strong homomorphism-embeddings

class NotRelational : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};
class NotHomomorphismEmbedding : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

struct InjectiveResult {
  Structure b;
  VertexMap f;
  int steps = 0;  // amalgamation steps performed
};

/// Separates collisions one vertex at a time: the moved vertex goes to a
/// second copy of b amalgamated freely over the image of every vertex
/// outside its collision class.
InjectiveResult injectivize_homomorphism_embedding(const Structure& a,
                                                   const VertexMap& f,
                                                   const Structure& b);

}  // namespace ramsey
