#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ramsey/amalgamation.hpp"
#include "ramsey/halesjewett.hpp"
#include "ramsey/structures.hpp"

namespace ramsey {

/// L-structure together with a projection onto predicates 0..k-1.
struct PartiteSystem {
  Structure s;
  std::vector<int> proj;
  int predicates = 0;

  std::vector<VertexSet> partitions() const;
  /// The L_P structure: s with one unary relation "P<i>" per predicate.
  Structure with_predicates() const;
  /// Candidate lists for partition-preserving maps from `from` into *this.
  std::vector<std::vector<int>> candidates_for(
      const std::vector<int>& from_proj) const;
  bool transversal() const;
};

/// Every vertex v of a placed in predicate alpha[v].
PartiteSystem transversal_system(const Structure& a, const VertexMap& alpha,
                                 int predicates);

struct PartiteReport {
  bool valid = true;
  bool transversal = false;
  bool projection_ok = true;    // homomorphism-embedding into `over`
  bool u_transversal = true;
  std::vector<std::string> problems;
};

PartiteReport validate_partite(const PartiteSystem& b,
                               const Structure* over = nullptr,
                               const SymbolSet* u = nullptr);

/// Vertices of the power, partition p holding all maps n -> B_p in
/// lexicographic order.
class PowerIndex {
 public:
  PowerIndex(const PartiteSystem& b, int n);
  int encode(int p, const std::vector<int>& coords) const;  // coords in B
  std::vector<int> decode(int v) const;                     // coords in B
  int partition_of(int v) const;
  std::int64_t size() const { return total_; }

 private:
  int n_;
  std::vector<VertexSet> parts_;
  std::vector<int> rank_;  // B vertex -> position in its partition
  std::vector<std::int64_t> offset_;
  std::vector<std::int64_t> radix_pow_;  // per partition |B_p|^n
  std::vector<int> part_of_b_;
  std::int64_t total_ = 0;
};

PartiteSystem power(const PartiteSystem& b, int n, const Limits& lim = {});

enum class ArrowMode { Full, Witness };
std::string to_string(ArrowMode m);

/// Full when n reaches a Hales-Jewett number the small search can confirm.
ArrowMode mode_for(int sigma_size, int n);

struct PartiteWitnesses {
  int exponent = 0;
  std::vector<VertexMap> sigma;          // the alphabet: embeddings A -> B
  std::vector<hj::Word> words;           // all words, lexicographic
  std::vector<VertexMap> e;              // e[i] = e_{words[i]}
  std::vector<hj::ParameterWord> pwords;  // all parameter words
  std::vector<VertexMap> f;              // f[i] = f_{pwords[i]}
};

struct PartiteLemmaResult {
  PartiteSystem c;
  PartiteWitnesses w;
  ArrowMode mode = ArrowMode::Witness;
};

/// Non-induced version: relations of C are the f_W images of the tuples
/// of b. `a` must be transversal over the predicates of b.
PartiteLemmaResult partite_lemma(const PartiteSystem& a,
                                 const PartiteSystem& b, int n,
                                 const Limits& lim = {});

/// Induced version: C = b^n, where b is an a-partite system (predicate p
/// is vertex p of a). With u the alphabet is the U-closed embeddings.
PartiteLemmaResult induced_partite_lemma(const Structure& a,
                                         const PartiteSystem& b, int n,
                                         const SymbolSet* u = nullptr,
                                         const Limits& lim = {});

enum class PartiteVariant { Induced, NonInduced };

/// Which embeddings of the restricted system into the core receive a full
/// copy: every one (the definition of a based system) or only the f_W.
enum class ExtensionPolicy { AllEmbeddings, ParameterWords };
std::string to_string(ExtensionPolicy p);

struct ExponentPolicy {
  enum class Kind { Fixed, HalesJewett, BaseAlphabet };
  Kind kind = Kind::Fixed;
  int fixed = 1;
  int hj_cap = 2;
  /// Per-step overrides, used before `kind` when present.
  std::vector<int> schedule;

  static ExponentPolicy witness(int n) {
    ExponentPolicy p;
    p.fixed = n;
    return p;
  }
};

struct PictureOptions {
  PartiteVariant variant = PartiteVariant::Induced;
  ExtensionPolicy extension = ExtensionPolicy::ParameterWords;
  std::optional<SymbolSet> u;  // closed mode
  Limits limits;
};

struct BasedOnRecord {
  VertexMap alpha;  // a -> predicates
  int exponent = 1;
  int sigma_size = 0;
  ArrowMode mode = ArrowMode::Witness;
  int core_size = 0;
  /// core vertex -> coordinates in the restricted system (its vertex ids)
  std::vector<std::vector<int>> core_coords;
  VertexSet restricted;  // vertices of the input projecting into alpha[A]
  /// Each extension: input vertex -> output vertex.
  std::vector<VertexMap> extensions;
};

struct PictureResult {
  PartiteSystem c;
  BasedOnRecord rec;
  PartiteWitnesses w;
};

PictureResult picture_lemma(const Structure& a, const VertexMap& alpha,
                            const PartiteSystem& b, int n,
                            const PictureOptions& opt = {});

struct ConstructionTrace {
  Structure target;                  // D (empty for the non-induced run)
  std::vector<PartiteSystem> pictures;
  std::vector<VertexMap> initial_copies;  // b -> P_0, one per beta
  std::vector<VertexMap> initial_betas;   // projection of each copy
  std::vector<BasedOnRecord> steps;
  ArrowMode mode = ArrowMode::Full;

  const PartiteSystem& final_picture() const { return pictures.back(); }
};

struct NoEmbeddings : public InvalidInput {
  using InvalidInput::InvalidInput;
};

int choose_exponent(const ExponentPolicy& pol, int step, int sigma_size,
                    int base_sigma);

/// Induced construction over target d; with opt.u the alphabet of every
/// step is restricted to U-closed embeddings (the half U-closed variant).
ConstructionTrace induced_construction(const Structure& a, const Structure& b,
                                       const Structure& d,
                                       const ExponentPolicy& pol,
                                       const PictureOptions& opt = {});

/// Non-induced construction on k ordered predicates for ordered a, b whose
/// order is the vertex order. The result's < is extended to a linear order.
struct UnrestrictedResult {
  ConstructionTrace trace;
  Structure c;
};
UnrestrictedResult unrestricted_construction(const Structure& a,
                                             const Structure& b,
                                             int predicates,
                                             const ExponentPolicy& pol,
                                             const PictureOptions& opt = {});

/// Whether relation `lt` is acyclic (and irreflexive).
bool order_acyclic(const Structure& s, const std::string& lt = "<");
/// Replaces `lt` by a linear extension (smallest available vertex first).
Structure linear_extension(const Structure& s, const std::string& lt = "<");

/// Invariant on pictures for posets with linear extension: `ll` is
/// contained in `lt`, and (transitive closure of ll) meets lt only in ll.
struct PosetInvariant {
  bool contained = true;
  bool closure_ok = true;
};
PosetInvariant check_poset_invariant(const Structure& p,
                                     const std::string& lt = "<",
                                     const std::string& ll = "<<");

/// Every irreducible substructure of each picture projects into a copy of b
/// in the target. Returns the first failure as (picture, vertex set).
std::optional<std::pair<int, VertexSet>> check_irreducible_projection(
    const ConstructionTrace& t, const Structure& b);

// --- Iterated construction -------------------------------------------------

struct TreeWitness {
  VertexSet sub;  // vertex set of the substructure C'
  TreeAmalgamSpec spec;
  VertexMap f;  // position in sub -> vertex of the evaluated tree amalgam
};

struct ExtensionCertificate {
  VertexSet irreducible;  // E
  VertexMap copy;         // b -> C with E inside the image
};

struct SparsenResult {
  Structure c;
  VertexMap to_c0;  // homomorphism-embedding C -> C0
  std::vector<TreeWitness> witnesses;
  std::vector<ExtensionCertificate> extensions;
  std::vector<ConstructionTrace> traces;
  int n = 0;
};

SparsenResult sparsen(const Structure& a, const Structure& b,
                      const Structure& c0, int n, const ExponentPolicy& pol,
                      const PictureOptions& opt = {});

struct TreeLikeVerdict {
  VertexSet sub;
  bool valid = true;
  std::string failure;  // clause that failed
};

struct TreeLikeReport {
  bool all_valid = true;
  std::vector<TreeLikeVerdict> verdicts;
};

TreeLikeReport is_locally_treelike(const Structure& c, const Structure& a,
                                   const Structure& b, int n,
                                   const std::vector<TreeWitness>& witnesses);

// --- Recursive construction with closures -----------------------------------

struct ClosedConstructionResult {
  Structure c;  // linearly ordered
  Structure d;  // the starting Ramsey structure
  std::vector<ConstructionTrace> inner;  // one half-closed run per step
  std::vector<PartiteSystem> pictures;   // outer pictures P_0..P_m
  std::vector<VertexMap> copies;         // U-closed copies of b in c
  std::vector<bool> u_transversal;       // per outer picture
};

/// Outer loop over all embeddings a -> d; each step builds the little
/// picture with the closed picture lemma and then runs the half U-closed
/// construction over it. When d is absent it is produced by the
/// non-induced construction on `predicates` predicates.
ClosedConstructionResult recursive_closed_construction(
    const Structure& a, const Structure& b, const SymbolSet& u,
    const ExponentPolicy& pol, std::optional<Structure> d = std::nullopt,
    int predicates = 0, const PictureOptions& opt = {});

/// Whether each value set of the U relations is transversal.
bool u_transversal(const PartiteSystem& p, const SymbolSet& u);

/// Relational encoding: each function F of arity k becomes relation F of
/// arity k+1; returns the encoded structure and the U symbol list.
std::pair<Structure, SymbolSet> relational_encoding(const Structure& s);

}  // namespace ramsey
