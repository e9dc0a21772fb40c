#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ramsey/amalgamation.hpp"
#include "ramsey/structures.hpp"

namespace ramsey {

/// Partial automorphism (domain, images) -> automorphism of the witness.
using ExtensionTable = std::map<std::pair<VertexSet, VertexMap>, VertexMap>;

struct EppaInstance {
  Structure small;
  Structure witness;
  VertexMap inclusion;  // small -> witness, an embedding
  std::optional<ExtensionTable> table;
};

struct EppaReport {
  bool verified = true;
  ExtensionTable table;
  std::optional<PartialAutomorphism> failing;  // first in enumeration order
};

/// Searches, for every partial automorphism p of the small structure, an
/// automorphism of the witness extending inclusion o p o inclusion^-1.
/// Throws InvalidInput when the inclusion is not an embedding.
EppaReport is_eppa_witness(const EppaInstance& inst,
                           std::int64_t max_nodes = 10000000);

class IncompleteTable : public InvalidInput {
 public:
  IncompleteTable(const PartialAutomorphism& p)
      : InvalidInput("extension table misses a partial automorphism"),
        missing(p) {}
  PartialAutomorphism missing;
};

struct CoherenceReport {
  bool coherent = true;
  /// "not an extension" (f == g is the bad entry) or "composition".
  std::string kind;
  std::optional<PartialAutomorphism> f, g;
};

/// Entries must be automorphisms extending their key; then
/// Psi(g o f) = Psi(g) o Psi(f) whenever Dom(g) = Range(f).
CoherenceReport check_coherence(const EppaInstance& inst);

struct FaithfulReport {
  bool faithful = true;
  std::optional<VertexSet> failing;  // maximal irreducible set of the witness
};

/// Every maximal irreducible substructure of the witness can be moved into
/// the image of the small structure by an automorphism.
FaithfulReport is_irreducible_faithful(const EppaInstance& inst,
                                       std::int64_t max_nodes = 10000000);

/// Amalgam built from a joint embedding and an EPPA witness of the joint
/// structure: the partial automorphism identifying the two copies of the
/// base extends to theta, and beta1 = theta o inclusion o j1,
/// beta2 = inclusion o j2.
std::optional<Amalgam> amalgam_from_eppa(const AmalgamationProblem& p,
                                         const Structure& joint,
                                         const VertexMap& j1,
                                         const VertexMap& j2,
                                         const EppaInstance& witness,
                                         std::int64_t max_nodes = 10000000);

// ---------------------------------------------------------------------------

class NotNPartiteTournament : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Oriented graph in relation "E" (tuple (x, y) is an edge x -> y).
Language tournament_language();

/// Throws NotNPartiteTournament unless there are at least two parts, no
/// edges inside a part and exactly one edge between vertices of different
/// parts.
void check_npartite_tournament(const Structure& a, const std::vector<int>& parts);

struct NPartiteWitness {
  Structure normalized;             // parts consecutive and equal-sized
  std::vector<int> normalized_parts;
  VertexMap renumber;               // a -> normalized
  int padding = 0;                  // vertices added to equalize parts
  Structure b;
  std::vector<int> b_parts;
  /// b vertex i is (x, chi) with chi over N(x) in increasing order, the
  /// first neighbour being the most significant bit.
  std::vector<std::pair<int, std::uint32_t>> labels;
  VertexMap psi;        // normalized -> b
  VertexMap embedding;  // a -> b
};

/// Padding vertices join the end of their part and are joined to every
/// other part by edges oriented from the lower to the higher number.
NPartiteWitness npartite_tournament_witness(const Structure& a,
                                            const std::vector<int>& parts);

}  // namespace ramsey
