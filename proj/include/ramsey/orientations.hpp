#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ramsey/amalgamation.hpp"
#include "ramsey/structures.hpp"

namespace ramsey {

/// Simple undirected graph; edges stored once as (u, v), u < v, sorted.
struct UGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;

  /// Reads relation "E"; it must be symmetric and loop free.
  static UGraph from_structure(const Structure& s);
  Structure to_structure() const;
  bool adjacent(int u, int v) const;
  UGraph induced(const VertexSet& vs) const;  // renumbered in order of vs
};

class BoundExceeded : public CapExceeded {
 public:
  using CapExceeded::CapExceeded;
};

/// 2n - m.
int predimension(const UGraph& g);
int predimension(const Structure& g);

enum class DeltaClass { C0, CF };

/// Logarithm base used for C_F unless another is passed.
inline const double kDefaultLogBase = std::exp(1.0);

struct MembershipResult {
  bool member = true;
  std::optional<VertexSet> violating;  // least by size, then lexicographic
};

/// Minimum of delta over induced subgraphs: removing edges only raises
/// delta, so induced subgraphs with all their edges are the extreme cases.
/// C_F requires delta(H) >= log(|H|) for every non-empty H.
MembershipResult class_membership(const UGraph& g, DeltaClass which,
                                  double log_base = kDefaultLogBase,
                                  int bound = 12);

/// Each edge (u, v) of the underlying graph gets a tail, stored as
/// arcs[i] = (tail, head) for edges[i].
struct OrientedGraph {
  UGraph g;
  std::vector<std::pair<int, int>> arcs;

  std::vector<int> outdegrees() const;
  /// Outdegree at most 2 everywhere.
  bool is_2orientation() const;
  /// Vertices of outdegree below 2 with multiplicity 2 - outdegree.
  std::vector<std::pair<int, int>> roots() const;
  int multiplicity_sum() const;
  /// Roots reachable from u along arcs (u itself when it is a root).
  VertexSet roots_from(int u) const;
  bool successor_closed(const VertexSet& a) const;
  bool successor_d_closed(const VertexSet& a) const;
  /// Relation "E" holding the arcs.
  Structure to_structure() const;
};

/// 2-orientation by bipartite matching of edges into two slots per vertex.
/// With `closed`, edges leaving the set are forced to point into it. With
/// d_closed, orientations are enumerated until every vertex outside the set
/// reaches a root outside it.
std::optional<OrientedGraph> find_2orientation(
    const UGraph& g, const std::optional<VertexSet>& closed = std::nullopt,
    bool d_closed = false, std::int64_t max_nodes = 10000000);

enum class SubOrder { LeqS, LeqD };

struct SubOrderResult {
  bool holds = true;
  /// Least vertex superset of h whose induced subgraph breaks the order.
  std::optional<VertexSet> witness;
};

/// h must be a vertex set of g (its induced subgraph is meant). Only the
/// induced supersets need checking, by the same monotonicity argument.
SubOrderResult substructure_order(const UGraph& g, const VertexSet& h,
                                  SubOrder which, int bound = 12);

/// Orientation of a free amalgam of graphs over a base that is <=_s in
/// both sides: orient each side with the base successor-closed, use the
/// left orientation on the base and take the union. nullopt when either
/// side has no such orientation.
std::optional<OrientedGraph> orient_free_amalgam(const AmalgamationProblem& p,
                                                 const Amalgam& am);

}  // namespace ramsey
