#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ramsey/structures.hpp"

namespace ramsey {

struct AmalgamationProblem {
  Structure base;
  Structure left;
  Structure right;
  VertexMap alpha1;  // base -> left
  VertexMap alpha2;  // base -> right
};

struct Amalgam {
  Structure c;
  VertexMap beta1;  // left -> c
  VertexMap beta2;  // right -> c
};

/// Throws InvalidInput unless both alphas are embeddings.
void check_problem(const AmalgamationProblem& p);

/// Vertices of `left` keep their numbers; the new vertices of `right`
/// follow in increasing order.
Amalgam free_amalgam(const AmalgamationProblem& p);

enum class AmalgamGrade { None, Amalgam, Strong, Free };
std::string to_string(AmalgamGrade g);

AmalgamGrade is_amalgam(const Structure& c, const AmalgamationProblem& p,
                        const VertexMap& beta1, const VertexMap& beta2);

/// Binary recipe for a tree amalgam. Node 0..k-1; a node is a leaf when
/// it has no children.
struct TreeAmalgamNode {
  int left = -1;
  int right = -1;
  Structure overlap;  // D
  VertexMap f1;       // D -> evaluation of left
  VertexMap f2;       // D -> evaluation of right
  bool leaf() const { return left < 0; }
};

struct TreeAmalgamSpec {
  Structure leaf;
  std::vector<TreeAmalgamNode> nodes;
  int root = 0;

  static TreeAmalgamSpec single(const Structure& a);
};

struct TreeAmalgamResult {
  Structure s;
  std::vector<VertexMap> copies;  // one embedding leaf -> s per leaf node
};

struct OverlapNotInIrreducible : public InvalidInput {
  OverlapNotInIrreducible(int node_, int side_)
      : InvalidInput("tree amalgam node " + std::to_string(node_) +
                     ": overlap image on side " + std::to_string(side_) +
                     " lies in no irreducible substructure"),
        node(node_),
        side(side_) {}
  int node;
  int side;
};

TreeAmalgamResult tree_amalgam(const TreeAmalgamSpec& spec);

/// Whether vs is contained in some irreducible closed substructure of s.
bool inside_irreducible(const Structure& s, const VertexSet& vs);

enum class PropertyStatus { Verified, Violated, Unknown };
std::string to_string(PropertyStatus s);

struct PropertyResult {
  PropertyStatus status = PropertyStatus::Verified;
  std::string counterexample;
  int checked = 0;  // problems decided
  int skipped = 0;  // problems whose free amalgam exceeds the bound
};

struct ClassReport {
  PropertyResult hereditary, jep, ap, strong_ap, free_ap;
};

/// Checks the Fraisse-class properties on a finite catalog. Membership is
/// isomorphism to a listed structure; only problems whose free amalgam has
/// at most `bound` vertices are decided.
ClassReport check_class_properties(const std::vector<Structure>& catalog,
                                   int bound,
                                   std::int64_t max_nodes = 10000000);

/// Searches the catalog for an amalgam of p of the requested grade
/// (Amalgam or Strong); free amalgams are tried first.
std::optional<Amalgam> find_amalgam_in(const std::vector<Structure>& catalog,
                                       const AmalgamationProblem& p,
                                       AmalgamGrade grade, int bound);

int catalog_index(const std::vector<Structure>& catalog, const Structure& s);

enum class ForbidMode {
  Embedding,
  Monomorphism,
  Homomorphism,
  HomomorphismEmbedding
};

struct ForbiddenWitness {
  int member;  // index into the family
  VertexMap map;
};

std::optional<ForbiddenWitness> forbidden_free(
    const Structure& s, const std::vector<Structure>& family, ForbidMode mode);

}  // namespace ramsey
